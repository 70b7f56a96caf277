//! Restrict checking to traces that exercise every listed feature.

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::interp::{execute, DEFAULT_STEP_LIMIT};
use swarm_bmc::{check, BmcOptions};

fn main() {
    let program = Benchmark::Stack.default_program();
    let opts = BmcOptions {
        depth: 12,
        required: ["pop", "push", "top"].into_iter().collect(),
        ..BmcOptions::default()
    };
    let outcome = check(&program, &opts).unwrap();
    let cex = outcome.counterexample().expect("the overflow is reachable with all three operations");
    let run = execute(&program, &cex.tape, DEFAULT_STEP_LIMIT, cex.tape.width);
    println!("violation at line {}", cex.line);
    println!("operations on the trace: {}", run.log.join(" "));
}
