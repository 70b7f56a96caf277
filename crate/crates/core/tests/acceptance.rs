//! Acceptance checks. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::bmc::{prepare, Counterexample};
use swarm_bmc::encode::{word_value, Bit, CnfBuilder, Word};
use swarm_bmc::frontend::BinOp;
use swarm_bmc::interp::{enumerate, execute, replay, tape_space, HavocDomain, DEFAULT_STEP_LIMIT};
use swarm_bmc::sat::{check_model, solve, CnfFormula, SolveBudget, SolveResult};
use swarm_bmc::swarm::{run_swarm, SwarmOptions};
use swarm_bmc::transform::{omit_features, restrict_havocs};
use swarm_bmc::value::{eval_arith, eval_compare};
use swarm_bmc::{check, extract_features, parse, BmcOptions, FeatureSet, OutcomeKind, Program, Width};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn status(kind: &OutcomeKind) -> &'static str {
    match kind {
        OutcomeKind::Counterexample(_) => "counterexample",
        OutcomeKind::Verified { .. } => "verified",
        OutcomeKind::ResourceOut(_) => "resource_out",
    }
}

fn loo_statuses(p: &Program, depth: u32, slice: bool) -> BTreeMap<String, &'static str> {
    let opts = SwarmOptions {
        jobs: 1,
        keep_going: true,
        per_run: BmcOptions {
            depth,
            slice,
            ..BmcOptions::default()
        },
        ..SwarmOptions::default()
    };
    run_swarm(p, &opts)
        .unwrap()
        .per_config
        .iter()
        .map(|(c, o)| (c.label(), status(&o.kind)))
        .collect()
}

fn stack_statuses() -> Outcome {
    let p = Benchmark::Stack.program(8, 12);
    let expected: BTreeMap<String, &str> = [
        ("baseline", "counterexample"),
        ("pop", "counterexample"),
        ("top", "counterexample"),
        ("push", "verified"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    for slice in [false, true] {
        let got = loo_statuses(&p, 12, slice);
        ensure(got == expected, || format!("slice={slice}: {got:?}"))?;
    }
    Ok("baseline/pop/top counterexample, push verified, sliced and unsliced".into())
}

fn slicing_sizes() -> Outcome {
    let mut runs = 0;
    for b in Benchmark::ALL {
        let p = b.default_program();
        let mut configs = vec![FeatureSet::new()];
        configs.extend(extract_features(&p).iter().map(|f| [f].into_iter().collect()));
        for depth in [4, 8, 12] {
            for omitted in &configs {
                let opts = BmcOptions {
                    depth,
                    omitted: omitted.clone(),
                    ..BmcOptions::default()
                };
                let sliced = check(&p, &opts).unwrap();
                let full = check(&p, &BmcOptions { slice: false, ..opts }).unwrap();
                runs += 1;
                ensure(sliced.metrics.clauses <= full.metrics.clauses, || {
                    format!("{} {} k={depth}: {} > {}", b.name(), omitted.label(), sliced.metrics.clauses, full.metrics.clauses)
                })?;
                ensure(status(&sliced.kind) == status(&full.kind), || {
                    format!("{} {} k={depth}: verdicts differ", b.name(), omitted.label())
                })?;
            }
        }
    }
    let p = Benchmark::Stack.default_program();
    let clauses = |omit: &[&str]| {
        let opts = BmcOptions {
            depth: 12,
            omitted: omit.iter().copied().collect(),
            ..BmcOptions::default()
        };
        prepare(&p, &opts).unwrap().instance.stats.clauses
    };
    let (push, base) = (clauses(&["push"]), clauses(&[]));
    ensure(push < base, || format!("omit-push {push} >= baseline {base}"))?;
    Ok(format!("{runs} configurations; omit-push {push} < baseline {base} clauses"))
}

fn soundness() -> Outcome {
    let mut cexs: Vec<(Program, Counterexample)> = Vec::new();
    for b in Benchmark::ALL {
        let p = b.default_program();
        for depth in [4, 8, 12, 16] {
            for slice in [false, true] {
                let opts = SwarmOptions {
                    keep_going: true,
                    per_run: BmcOptions {
                        depth,
                        slice,
                        ..BmcOptions::default()
                    },
                    ..SwarmOptions::default()
                };
                for (_, o) in run_swarm(&p, &opts).unwrap().per_config {
                    if let Some(c) = o.counterexample() {
                        cexs.push((p.clone(), c.clone()));
                    }
                }
            }
        }
    }
    for seed in 0..40 {
        let p = parse(&common::random_program(seed)).unwrap();
        let opts = BmcOptions {
            depth: 3,
            width: Width::new(4).unwrap(),
            ..BmcOptions::default()
        };
        if let Some(c) = check(&p, &opts).unwrap().counterexample() {
            cexs.push((p.clone(), c.clone()));
        }
    }
    let bad = cexs
        .iter()
        .filter(|(p, c)| !(replay(p, c) && c.replays_on(p)))
        .count();
    ensure(cexs.len() >= 30, || format!("only {} counterexamples", cexs.len()))?;
    ensure(bad == 0, || format!("{bad} of {} failed replay", cexs.len()))?;
    Ok(format!("{} counterexamples, all replay", cexs.len()))
}

fn oracle_equivalence() -> Outcome {
    let width = Width::new(4).unwrap();
    let shrunk = [
        (Benchmark::Stack, 3),
        (Benchmark::Queue, 5),
        (Benchmark::StackList, 4),
    ];
    let mut pairs = 0;
    let mut fails = 0;
    for (b, actions) in shrunk {
        let domain = HavocDomain::per_variable([("action", (0..actions).collect()), ("v", vec![0])]);
        let p = restrict_havocs(&b.program(2, 3), &domain);
        let mut configs = vec![FeatureSet::new()];
        configs.extend(extract_features(&p).iter().map(|f| [f].into_iter().collect()));
        for omitted in configs {
            let variant = omit_features(&p, &omitted).unwrap();
            let space = tape_space(&variant.program, 3, width, &domain);
            ensure(space <= 1e5, || format!("{} tape space {space}", b.name()))?;
            let oracle = enumerate(&variant.program, 3, width, &domain).unwrap();
            let opts = BmcOptions {
                depth: 3,
                width,
                omitted: omitted.clone(),
                ..BmcOptions::default()
            };
            let o = check(&p, &opts).unwrap();
            let agree = match o.kind {
                OutcomeKind::Counterexample(_) => oracle.is_fail(),
                OutcomeKind::Verified { .. } => !oracle.is_fail(),
                OutcomeKind::ResourceOut(_) => false,
            };
            ensure(agree, || format!("{} {}: bmc {} vs oracle {:?}", b.name(), omitted.label(), status(&o.kind), oracle))?;
            pairs += 1;
            fails += oracle.is_fail() as usize;
        }
    }
    ensure(pairs >= 12, || format!("only {pairs} pairs"))?;
    Ok(format!("{pairs} pairs agree ({fails} failing, {} safe)", pairs - fails))
}

fn queue_two_sites() -> Outcome {
    let b = Benchmark::Queue;
    let opts = SwarmOptions {
        keep_going: true,
        per_run: BmcOptions {
            depth: 16,
            ..BmcOptions::default()
        },
        ..SwarmOptions::default()
    };
    let report = run_swarm(&b.default_program(), &opts).unwrap();
    let sites: BTreeSet<u32> = report
        .per_config
        .iter()
        .filter_map(|(_, o)| o.counterexample().map(|c| c.line))
        .collect();
    let bounds = b.line_of("q[rear] = x;").unwrap();
    let disposed = b.line_of("assert(handle != 0);").unwrap();
    ensure(sites.contains(&bounds) && sites.contains(&disposed), || {
        format!("sites {sites:?}, want {bounds} and {disposed}")
    })?;
    Ok(format!("bounds violation at line {bounds}, disposed handle at line {disposed}"))
}

fn random_3cnf(seed: u64) -> CnfFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = CnfFormula::new();
    f.num_vars = 20;
    for _ in 0..85 {
        let mut clause = Vec::new();
        while clause.len() < 3 {
            let v = rng.gen_range(1..=20);
            if !clause.iter().any(|l: &i32| l.abs() == v) {
                clause.push(if rng.gen_bool(0.5) { v } else { -v });
            }
        }
        f.add_clause(clause);
    }
    f
}

fn truth_table_sat(f: &CnfFormula) -> bool {
    let masks: Vec<(u32, u32)> = f
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(pos, neg), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (pos | bit, neg)
                } else {
                    (pos, neg | bit)
                }
            })
        })
        .collect();
    (0u32..1 << f.num_vars).any(|a| masks.iter().all(|&(pos, neg)| a & pos != 0 || !a & neg != 0))
}

fn solver_vs_truth_table() -> Outcome {
    let mut sat = 0;
    for seed in 0..100 {
        let f = random_3cnf(seed);
        let expected = truth_table_sat(&f);
        match solve(&f, &SolveBudget::unlimited(), seed) {
            SolveResult::Sat(m) => {
                ensure(expected, || format!("instance {seed}: solver SAT, table UNSAT"))?;
                ensure(check_model(&f, &m), || format!("instance {seed}: bad model"))?;
                sat += 1;
            }
            SolveResult::Unsat => ensure(!expected, || format!("instance {seed}: solver UNSAT, table SAT"))?,
            SolveResult::Unknown(r) => return Err(format!("instance {seed}: unknown {r:?}")),
        }
    }
    Ok(format!("100 instances agree ({sat} SAT, {} UNSAT)", 100 - sat))
}

fn swarm_json(file: &str, jobs: &str, extra: &[&str]) -> Value {
    let mut args: Vec<String> = [
        "swarm-bmc", "swarm", file, "--strategy", "half", "--configs", "8", "--seed", "42", "--keep-going", "--jobs", jobs,
        "--json",
    ]
    .map(String::from)
    .to_vec();
    args.extend(extra.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    swarm_bmc::cli::run(&args, &mut std::io::empty(), &mut out, &mut err);
    serde_json::from_slice(&out).unwrap()
}

fn strip_timing(v: &mut Value) {
    let obj = v.as_object_mut().unwrap();
    obj.remove("wall_time_ms");
    obj.remove("manifest");
    for c in obj["configs"].as_array_mut().unwrap() {
        c["metrics"].as_object_mut().unwrap().remove("solve_ms");
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stack.imp");
    std::fs::write(&path, Benchmark::Stack.default_source()).unwrap();
    let file = path.to_str().unwrap();
    let configs = |v: &Value| v["configs"].as_array().unwrap().iter().map(|c| c["omitted"].clone()).collect::<Vec<_>>();
    let mut sizes = Vec::new();
    for extra in [&[][..], &["--depth", "12"][..]] {
        let mut a = swarm_json(file, "1", extra);
        let mut b = swarm_json(file, "1", extra);
        let four = configs(&swarm_json(file, "4", extra));
        ensure(configs(&a) == four, || format!("{extra:?}: config lists differ between 1 and 4 jobs"))?;
        let verdict = a["verdict"]["kind"].clone();
        strip_timing(&mut a);
        strip_timing(&mut b);
        let (a, b) = (a.to_string(), b.to_string());
        ensure(a == b, || format!("{extra:?}: reports differ"))?;
        sizes.push(format!("{} configs, {verdict}, {} bytes", four.len(), a.len()));
    }
    Ok(format!("identical reports: {}", sizes.join("; ")))
}

#[derive(Clone, Copy)]
enum Op {
    Arith(BinOp),
    Cmp(BinOp),
}

fn circuit(op: Op, a: i64, b: i64, width: u32, differ_from: Option<i64>) -> (CnfFormula, Word, bool) {
    let mut cb = CnfBuilder::new();
    let x = cb.fresh_word(width);
    let y = cb.fresh_word(width);
    for (word, v) in [(&x, a), (&y, b)] {
        for (i, bit) in word.iter().enumerate() {
            let set = (v >> i) & 1 == 1;
            cb.clause(&[if set { *bit } else { bit.not() }]);
        }
    }
    let (result, is_bool): (Word, bool) = match op {
        Op::Arith(op) => (
            match op {
                BinOp::Add => cb.add(&x, &y),
                BinOp::Sub => cb.sub(&x, &y),
                BinOp::Mul => cb.mul(&x, &y),
                BinOp::Div => cb.sdivmod(&x, &y).0,
                BinOp::Rem => cb.sdivmod(&x, &y).1,
                _ => unreachable!(),
            },
            false,
        ),
        Op::Cmp(op) => {
            let bit = match op {
                BinOp::Lt => cb.slt(&x, &y),
                BinOp::Gt => cb.slt(&y, &x),
                BinOp::Le => cb.slt(&y, &x).not(),
                BinOp::Ge => cb.slt(&x, &y).not(),
                BinOp::Eq => cb.eq(&x, &y),
                BinOp::Ne => cb.eq(&x, &y).not(),
                _ => unreachable!(),
            };
            (vec![bit], true)
        }
    };
    if let Some(e) = differ_from {
        let target: Word = if is_bool {
            vec![Bit::Const(e != 0)]
        } else {
            cb.const_word(e, width)
        };
        let same = cb.eq(&result, &target);
        cb.clause(&[same.not()]);
    }
    (cb.cnf, result, is_bool)
}

fn bit_blasting() -> Outcome {
    let ops = [
        Op::Arith(BinOp::Add),
        Op::Arith(BinOp::Sub),
        Op::Arith(BinOp::Mul),
        Op::Arith(BinOp::Div),
        Op::Arith(BinOp::Rem),
        Op::Cmp(BinOp::Lt),
        Op::Cmp(BinOp::Le),
        Op::Cmp(BinOp::Gt),
        Op::Cmp(BinOp::Ge),
        Op::Cmp(BinOp::Eq),
        Op::Cmp(BinOp::Ne),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for bits in [4u32, 8] {
        let w = Width::new(bits).unwrap();
        for op in ops {
            for _ in 0..200 {
                let a = w.wrap(rng.gen::<i64>());
                let b = w.wrap(rng.gen::<i64>());
                let expected = match op {
                    Op::Arith(o) => eval_arith(o, a, b, w),
                    Op::Cmp(o) => eval_compare(o, a, b) as i64,
                };
                let (f, result, is_bool) = circuit(op, a, b, bits, None);
                let SolveResult::Sat(m) = solve(&f, &SolveBudget::unlimited(), 0) else {
                    return Err(format!("{bits}-bit {a},{b}: fixed inputs unsatisfiable"));
                };
                let got = if is_bool {
                    match result[0] {
                        Bit::Const(c) => c as i64,
                        Bit::Lit(l) => m.lit(l) as i64,
                    }
                } else {
                    word_value(&result, |l| m.lit(l))
                };
                ensure(got == expected, || format!("{bits}-bit op on {a},{b}: circuit {got}, expected {expected}"))?;
                let (f, _, _) = circuit(op, a, b, bits, Some(expected));
                ensure(solve(&f, &SolveBudget::unlimited(), 0).is_unsat(), || {
                    format!("{bits}-bit op on {a},{b}: another result is possible")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} operand pairs over 11 operators"))
}

fn required_features() -> Outcome {
    let p = Benchmark::Stack.default_program();
    let opts = BmcOptions {
        depth: 12,
        required: ["top", "pop", "push"].into_iter().collect(),
        ..BmcOptions::default()
    };
    let o = check(&p, &opts).unwrap();
    let cex = o.counterexample().ok_or_else(|| format!("no counterexample: {}", status(&o.kind)))?;
    let run = execute(&p, &cex.tape, DEFAULT_STEP_LIMIT, cex.tape.width);
    let called: BTreeSet<&str> = run.log.iter().map(String::as_str).collect();
    ensure(["top", "pop", "push"].iter().all(|f| called.contains(f)), || format!("calls {called:?}"))?;
    Ok(format!("trace calls {}", run.log.join(" ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("stack leave-one-out statuses", stack_statuses),
        ("slicing never grows instances", slicing_sizes),
        ("counterexamples replay", soundness),
        ("oracle equivalence", oracle_equivalence),
        ("queue faults at two sites", queue_two_sites),
        ("solver vs truth table", solver_vs_truth_table),
        ("seeded swarm determinism", determinism),
        ("bit-blasted arithmetic", bit_blasting),
        ("required features exercised", required_features),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name} ({secs:.1} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1} s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
