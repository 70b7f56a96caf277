//! Build arithmetic circuits over symbolic words and read results back from
//! a SAT model.

use swarm_bmc::encode::{word_value, CnfBuilder};
use swarm_bmc::sat::{solve, SolveBudget, SolveResult};
use swarm_bmc::value::eval_arith;
use swarm_bmc::frontend::BinOp;
use swarm_bmc::Width;

fn main() {
    let width = Width::new(8).unwrap();
    let mut cb = CnfBuilder::new();
    let x = cb.fresh_word(8);
    let y = cb.fresh_word(8);
    let product = cb.mul(&x, &y);
    let target = cb.const_word(-42, 8);
    let hit = cb.eq(&product, &target);
    cb.clause(&[hit]);
    // exclude the trivial factorisations
    let one = cb.const_word(1, 8);
    let minus_one = cb.const_word(-1, 8);
    for w in [&x, &y] {
        let a = cb.eq(w, &one);
        let b = cb.eq(w, &minus_one);
        cb.clause(&[a.not()]);
        cb.clause(&[b.not()]);
    }
    println!("{} variables, {} clauses", cb.cnf.num_vars, cb.cnf.clauses.len());
    match solve(&cb.cnf, &SolveBudget::unlimited(), 1) {
        SolveResult::Sat(m) => {
            let (a, b) = (word_value(&x, |l| m.lit(l)), word_value(&y, |l| m.lit(l)));
            println!("x = {a}, y = {b}, x * y wraps to {}", eval_arith(BinOp::Mul, a, b, width));
        }
        other => println!("unexpected: {other:?}"),
    }
}
