//! Leave-one-out swarm over the bundled stack benchmark.
//!
//! Omitting `push` makes the overflow unreachable, so that variant verifies
//! while every other configuration finds a counterexample.

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::swarm::{run_swarm, SwarmOptions};
use swarm_bmc::BmcOptions;

fn main() {
    let program = Benchmark::Stack.default_program();
    let opts = SwarmOptions {
        jobs: 4,
        keep_going: true,
        per_run: BmcOptions {
            depth: 12,
            ..BmcOptions::default()
        },
        ..SwarmOptions::default()
    };
    let report = run_swarm(&program, &opts).expect("stack benchmark is valid");
    print!("{}", report.table());
    println!("wall time: {} ms", report.wall_time_ms);
}
