//! The program rewrites behind one swarm configuration: feature omission,
//! feature requirement, call inlining and loop unrolling.

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::frontend::print_program;
use swarm_bmc::transform::{inline_calls, omit_features, require_features, unroll};
use swarm_bmc::FeatureSet;

fn main() {
    let program = Benchmark::Stack.program(2, 2);

    let omit: FeatureSet = ["top"].into_iter().collect();
    let variant = omit_features(&program, &omit).unwrap();
    println!("== omit top\n{}", print_program(&variant.program));

    let require: FeatureSet = ["push", "pop"].into_iter().collect();
    let variant = require_features(&program, &require).unwrap();
    println!("== require push, pop (main only)");
    let text = print_program(&variant.program);
    let main_at = text.find("func main").unwrap();
    println!("{}", &text[main_at..]);

    let inlined = inline_calls(&omit_features(&program, &FeatureSet::new()).unwrap().program);
    let unrolled = unroll(&inlined, 2).unwrap();
    println!("== inlined and unrolled twice\n{}", print_program(&unrolled));
}
