//! The array queue carries two faults: an unchecked enqueue that overruns
//! the array and operations on a disposed queue. Leave-one-out swarm with
//! keep-going finds both.

use std::collections::BTreeSet;

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::{run_swarm, BmcOptions, SwarmOptions};

fn main() {
    let program = Benchmark::Queue.default_program();
    let opts = SwarmOptions {
        keep_going: true,
        per_run: BmcOptions {
            depth: 16,
            ..BmcOptions::default()
        },
        ..SwarmOptions::default()
    };
    let report = run_swarm(&program, &opts).unwrap();
    print!("{}", report.table());
    let sites: BTreeSet<u32> = report
        .per_config
        .iter()
        .filter_map(|(_, o)| o.counterexample().map(|c| c.line))
        .collect();
    let source = Benchmark::Queue.default_source();
    let lines: Vec<&str> = source.lines().collect();
    for line in sites {
        println!("fault site line {line}: {}", lines[line as usize - 1].trim());
    }
}
