mod common;

use std::ops::ControlFlow;

use proptest::prelude::*;
use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::bmc::{prepare, OutcomeKind, ResourceReason};
use swarm_bmc::interp::{enumerate, explore, HavocDomain, OutcomeKind as Exec};
use swarm_bmc::swarm::{aggregate, run_swarm, SwarmConfig, SwarmOptions};
use swarm_bmc::transform::{inline_calls, omit_features, restrict_havocs, unroll};
use swarm_bmc::{check, parse, BmcOptions, FeatureSet, VerificationOutcome, Width};

fn w4() -> Width {
    Width::new(4).unwrap()
}

#[test]
fn unrolled_stack_admits_every_action_sequence() {
    let p = Benchmark::Stack.program(6, 5);
    let domain = HavocDomain::per_variable([("v", vec![0])]);
    let q = unroll(&inline_calls(&omit_features(&p, &FeatureSet::new()).unwrap().program), 5).unwrap();
    let mut completed = 0;
    explore(&q, 5, w4(), &domain, |_, out| {
        if out.kind == Exec::Completed {
            completed += 1;
        }
        ControlFlow::Continue(())
    })
    .unwrap();
    assert_eq!(completed, 243);
}

#[test]
fn insufficient_unwinding_blocks_every_execution() {
    let p = parse("func main() { int i = 0; while (i < 3) { i = i + 1; } assert(false); }").unwrap();
    let o = check(&p, &BmcOptions { depth: 2, ..BmcOptions::default() }).unwrap();
    assert!(o.is_verified());
    let o = check(&p, &BmcOptions { depth: 3, ..BmcOptions::default() }).unwrap();
    assert!(o.counterexample().is_some());
}

#[test]
fn omitting_push_leaves_no_failure_at_any_tested_bound() {
    let p = Benchmark::Stack.program(2, 4);
    let variant = omit_features(&p, &["push"].into_iter().collect()).unwrap();
    let domain = HavocDomain::per_variable([("action", vec![0, 1, 2]), ("v", vec![0, 5])]);
    for k in 1..=4 {
        assert!(!enumerate(&variant.program, k, w4(), &domain).unwrap().is_fail());
    }
    let o = check(&p, &BmcOptions { depth: 4, width: w4(), omitted: ["push"].into_iter().collect(), ..BmcOptions::default() }).unwrap();
    assert!(o.is_verified());
}

#[test]
fn slicing_shrinks_the_omit_pop_instance() {
    let p = Benchmark::Stack.program(2, 4);
    let base = BmcOptions {
        depth: 4,
        width: w4(),
        omitted: ["pop"].into_iter().collect(),
        ..BmcOptions::default()
    };
    let full = prepare(&p, &BmcOptions { slice: false, ..base.clone() }).unwrap();
    let sliced = prepare(&p, &base).unwrap();
    assert!(sliced.instance.stats.clauses < full.instance.stats.clauses);
    let a = check(&p, &BmcOptions { slice: false, ..base.clone() }).unwrap();
    let b = check(&p, &base).unwrap();
    assert_eq!(a.counterexample().is_some(), b.counterexample().is_some());
    let domain = HavocDomain::per_variable([("action", vec![0, 1, 2]), ("v", vec![0])]);
    let variant = omit_features(&p, &base.omitted).unwrap();
    assert_eq!(
        enumerate(&variant.program, 4, w4(), &domain).unwrap().is_fail(),
        a.counterexample().is_some()
    );
}

#[test]
fn counterexample_decodes_the_unique_input() {
    let p = parse("func main() { int x; x = havoc(); assert(x != 7); }").unwrap();
    let o = check(&p, &BmcOptions { width: w4(), ..BmcOptions::default() }).unwrap();
    let cex = o.counterexample().unwrap();
    assert_eq!(cex.tape.values, [7]);
    assert_eq!(cex.line, 1);
}

#[test]
fn restricted_inputs_match_restricted_enumeration() {
    let domain = HavocDomain::per_variable([("action", vec![0, 1, 2, 3, 4]), ("v", vec![0])]);
    let p = restrict_havocs(&Benchmark::Queue.program(2, 3), &domain);
    for omit in ["enqueue", "dispose"] {
        let omitted: FeatureSet = [omit].into_iter().collect();
        let variant = omit_features(&p, &omitted).unwrap();
        let oracle = enumerate(&variant.program, 3, w4(), &domain).unwrap();
        let o = check(&p, &BmcOptions { depth: 3, width: w4(), omitted, ..BmcOptions::default() }).unwrap();
        assert_eq!(oracle.is_fail(), o.counterexample().is_some(), "{omit}");
    }
}

fn outcome(kind: OutcomeKind) -> VerificationOutcome {
    VerificationOutcome { kind, metrics: Default::default() }
}

proptest! {
    #[test]
    fn verdict_only_moves_toward_falsified(kinds in prop::collection::vec(0u8..3, 1..6), extra in 0u8..3) {
        let make = |i: usize, k: u8| {
            let c = SwarmConfig::new([format!("f{i}")].into_iter().collect());
            let kind = match k {
                0 => OutcomeKind::Verified { depth: 2 },
                1 => OutcomeKind::ResourceOut(ResourceReason::TimeLimit),
                _ => {
                    let p = parse("func main() { assert(false); }").unwrap();
                    check(&p, &BmcOptions::default()).unwrap().kind
                }
            };
            (c, outcome(kind))
        };
        let results: Vec<_> = kinds.iter().enumerate().map(|(i, &k)| make(i, k)).collect();
        let before = aggregate(&results, false);
        let mut more = results.clone();
        more.push(make(99, extra));
        let after = aggregate(&more, false);
        prop_assert!(after.rank() >= before.rank());
        if before.kind() == "falsified" {
            prop_assert_eq!(before, after);
        }
    }
}

#[test]
fn swarm_outcomes_do_not_depend_on_jobs() {
    for b in Benchmark::ALL {
        let p = b.program(3, 5);
        let run = |jobs| {
            let opts = SwarmOptions {
                jobs,
                keep_going: true,
                per_run: BmcOptions { depth: 5, ..BmcOptions::default() },
                ..SwarmOptions::default()
            };
            let r = run_swarm(&p, &opts).unwrap();
            r.per_config
                .into_iter()
                .map(|(c, o)| (c.label(), o.counterexample().is_some(), o.is_verified()))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(1), run(4), "{}", b.name());
    }
}

#[test]
fn every_reported_counterexample_replays_on_the_base_program() {
    for seed in 0..80u64 {
        let src = common::random_program(seed);
        let p = parse(&src).unwrap();
        let opts = SwarmOptions {
            jobs: 2,
            keep_going: true,
            per_run: BmcOptions { depth: 2, width: w4(), ..BmcOptions::default() },
            ..SwarmOptions::default()
        };
        for (_, o) in run_swarm(&p, &opts).unwrap().per_config {
            if let Some(cex) = o.counterexample() {
                assert!(cex.replays_on(&p), "{src}");
            }
        }
    }
}
