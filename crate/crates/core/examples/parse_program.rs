//! Parse a program, list its features and pretty-print it back.

use swarm_bmc::frontend::print_program;
use swarm_bmc::{extract_features, parse_named, validate};

const SOURCE: &str = r#"
int total = 0;

func add(int x) {
  log("add");
  total = total + x;
}

func main() {
  int n;
  n = havoc();
  assume(n >= 0 && n < 4);
  for (int i = 0; i < n; i = i + 1) {
    add(i);
  }
  assert(total < 6);
}
"#;

fn main() {
    let program = parse_named(SOURCE, "sum.imp").expect("parses");
    let errors = validate(&program);
    assert!(errors.is_empty(), "{errors:?}");
    println!("features: {}", extract_features(&program));
    print!("{}", print_program(&program));

    match parse_named("func main() { x = ; }", "broken.imp") {
        Ok(_) => unreachable!(),
        Err(e) => println!("parse error: {e}"),
    }
}
