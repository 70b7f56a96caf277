//! Status tables for every bundled benchmark, with and without slicing.
//!
//! ```text
//! cargo run --release --example bench
//! ```

use swarm_bmc::benchmarks::Benchmark;
use swarm_bmc::{run_swarm, BmcOptions, SwarmOptions};

fn main() {
    for b in Benchmark::ALL {
        let depth = match b {
            Benchmark::Stack => 12,
            Benchmark::Queue => 16,
            Benchmark::StackList => 12,
        };
        for slice in [false, true] {
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
            let report = run_swarm(&b.default_program(), &opts).unwrap();
            println!("== {} depth {depth}{}", b.file_name(), if slice { ", sliced" } else { "" });
            print!("{}", report.table());
            println!("wall time {} ms\n", report.wall_time_ms);
        }
    }
}
