//! The CDCL solver on its own: DIMACS in, model or refutation out.

use swarm_bmc::sat::{check_model, parse_dimacs, solve_with_stats, write_dimacs, CnfFormula, SolveBudget, SolveResult};

fn pigeonhole(pigeons: i32, holes: i32) -> CnfFormula {
    let var = |p: i32, h: i32| p * holes + h + 1;
    let mut f = CnfFormula::new();
    f.num_vars = (pigeons * holes) as u32;
    for p in 0..pigeons {
        f.add_clause((0..holes).map(|h| var(p, h)).collect::<Vec<_>>());
    }
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                f.add_clause(vec![-var(p, h), -var(q, h)]);
            }
        }
    }
    f
}

fn main() {
    let f = parse_dimacs("c tiny\np cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n").unwrap();
    let (result, _) = solve_with_stats(&f, &SolveBudget::unlimited(), 0);
    if let SolveResult::Sat(m) = &result {
        println!("tiny: SAT {:?} (model checks: {})", m.literals(), check_model(&f, m));
    }

    for n in 5..=7 {
        let f = pigeonhole(n + 1, n);
        let (result, stats) = solve_with_stats(&f, &SolveBudget::unlimited(), 0);
        println!(
            "pigeonhole {}/{}: {} after {} conflicts, {} restarts",
            n + 1,
            n,
            if result.is_unsat() { "UNSAT" } else { "?" },
            stats.conflicts,
            stats.restarts
        );
    }
    print!("{}", write_dimacs(&pigeonhole(3, 2), &["3 pigeons, 2 holes".to_string()]));
}
