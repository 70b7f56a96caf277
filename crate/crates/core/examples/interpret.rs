//! Run the stack benchmark on a fixed nondeterministic tape and print the
//! recorded trace.

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::interp::{execute_with, ExecConfig, OutcomeKind};
use swarm_bmc::Width;

fn main() {
    let program = Benchmark::Stack.program(2, 4);
    // push 5, push 6, top: top reads the slot above the stack
    let tape = [1, 5, 1, 6, 0];
    let cfg = ExecConfig {
        record_trace: true,
        ..ExecConfig::new(Width::DEFAULT)
    };
    let out = execute_with(&program, &tape, &cfg);
    for entry in &out.trace {
        let line = program.loc(entry.stmt).map_or(0, |l| l.line);
        println!("line {line:>3}  {:?}", entry.vars);
    }
    println!("features exercised: {:?}", out.log);
    match out.kind {
        OutcomeKind::AssertionViolation { stmt, step } => {
            println!("violation on line {} at step {step}", program.loc(stmt).unwrap().line)
        }
        other => println!("outcome: {other:?}"),
    }
}
