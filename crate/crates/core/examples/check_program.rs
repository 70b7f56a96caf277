//! Single-configuration bounded model checking, counterexample JSON and
//! replay.

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::{check, BmcOptions, Counterexample, OutcomeKind, Width};

fn main() {
    let program = Benchmark::Stack.default_program();
    for omit in [None, Some("push")] {
        let opts = BmcOptions {
            depth: 12,
            omitted: omit.into_iter().collect(),
            ..BmcOptions::default()
        };
        let outcome = check(&program, &opts).unwrap();
        let m = outcome.metrics;
        print!("omit {:<5} vars={} clauses={} sliced={}: ", omit.unwrap_or("-"), m.vars, m.clauses, m.sliced);
        match &outcome.kind {
            OutcomeKind::Counterexample(cex) => {
                println!("counterexample at {}:{}", cex.file, cex.line);
                let json = cex.to_json();
                println!("{}", serde_json::to_string(&json["tape"]).unwrap());
                let back = Counterexample::from_json(&json, &program, Width::DEFAULT).unwrap();
                println!("replays on the original program: {}", back.replays_on(&program));
            }
            OutcomeKind::Verified { depth } => println!("verified to depth {depth}"),
            OutcomeKind::ResourceOut(r) => println!("resource out: {r:?}"),
        }
    }
}
