//! Exhaustive enumeration of tapes as an independent oracle, compared with
//! the SAT-based checker on a shrunken stack.

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::interp::{enumerate, HavocDomain, OracleVerdict};
use swarm_bmc::transform::{omit_features, restrict_havocs};
use swarm_bmc::{check, BmcOptions, Width};

fn main() {
    let width = Width::new(4).unwrap();
    let domain = HavocDomain::per_variable([("action", vec![0, 1, 2]), ("v", vec![0])]);
    // both sides see the same shrunken input space
    let program = restrict_havocs(&Benchmark::Stack.program(2, 3), &domain);
    for omit in [None, Some("push"), Some("pop"), Some("top")] {
        let omitted = omit.into_iter().collect();
        let variant = omit_features(&program, &omitted).unwrap();
        let oracle = enumerate(&variant.program, 3, width, &domain).unwrap();
        let bmc = check(
            &program,
            &BmcOptions {
                depth: 3,
                width,
                omitted,
                ..BmcOptions::default()
            },
        )
        .unwrap();
        let oracle_text = match &oracle {
            OracleVerdict::Fails { tape, .. } => format!("fails on {:?}", tape.values),
            OracleVerdict::SafeWithinBound { tapes } => format!("safe ({tapes} tapes)"),
        };
        println!(
            "omit {:<6} oracle: {:<28} bmc: {}",
            omit.unwrap_or("-"),
            oracle_text,
            if bmc.counterexample().is_some() { "counterexample" } else { "verified" }
        );
    }
}
