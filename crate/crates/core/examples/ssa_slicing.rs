//! Guarded SSA for a small program, before and after slicing.

use swarm_bmc::encode::slice;
use swarm_bmc::transform::{inline_calls, omit_features, to_ssa, unroll};
use swarm_bmc::{parse, FeatureSet, Width};

const SOURCE: &str = r#"
int a[4];
func main() {
  int i;
  int j;
  int noise;
  i = havoc();
  j = havoc();
  noise = havoc();
  noise = noise * 3;
  if (j == 2) {
    log("write");
    a[i] = j;
  }
  assert(a[1] != 2);
}
"#;

fn main() {
    let program = parse(SOURCE).unwrap();
    for omit in [FeatureSet::new(), ["write"].into_iter().collect()] {
        let variant = omit_features(&program, &omit).unwrap();
        let ssa = to_ssa(&unroll(&inline_calls(&variant.program), 1).unwrap(), Width::DEFAULT).unwrap();
        let (sliced, changed) = slice(&ssa);
        println!("== omitted {omit}: {} equations, {} after slicing (changed: {changed})", ssa.defs.len(), sliced.defs.len());
        print!("{sliced}");
    }
}
