//! A conflict-driven clause-learning SAT solver and DIMACS support.

mod dimacs;
mod heap;
mod solver;

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

pub use dimacs::{parse_dimacs, write_dimacs, DimacsError};
pub use solver::{SolveStats, Solver};

/// A formula in conjunctive normal form with DIMACS-style literals:
/// variable `v` is `v`, its negation `-v`, and variables are `1..=num_vars`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new() -> CnfFormula {
        CnfFormula::default()
    }

    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add_clause(&mut self, clause: impl Into<Vec<i32>>) {
        let clause = clause.into();
        for &l in &clause {
            assert!(l != 0 && l.unsigned_abs() <= self.num_vars, "literal {l} out of range");
        }
        self.clauses.push(clause);
    }
}

/// A total assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn from_values(values: Vec<bool>) -> Model {
        Model { values }
    }

    /// Value of variable `var` (1-based).
    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }

    pub fn lit(&self, lit: i32) -> bool {
        self.value(lit.unsigned_abs()) == (lit > 0)
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// DIMACS-style literal list, one per variable.
    pub fn literals(&self) -> Vec<i32> {
        (1..=self.values.len() as i32)
            .map(|v| if self.values[v as usize - 1] { v } else { -v })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    ConflictLimit,
    TimeLimit,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
    Unknown(UnknownReason),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveResult::Unsat)
    }
}

/// Resource limits for one solver call. `None` means unlimited.
#[derive(Debug, Clone, Default)]
pub struct SolveBudget {
    pub max_conflicts: Option<u64>,
    pub max_time: Option<Duration>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl SolveBudget {
    pub fn unlimited() -> SolveBudget {
        SolveBudget::default()
    }

    pub fn conflicts(n: u64) -> SolveBudget {
        SolveBudget {
            max_conflicts: Some(n),
            ..SolveBudget::default()
        }
    }
}

/// Solves `f`. The seed drives the few random decisions the solver makes,
/// so equal seeds give identical runs.
pub fn solve(f: &CnfFormula, budget: &SolveBudget, seed: u64) -> SolveResult {
    solve_with_stats(f, budget, seed).0
}

pub fn solve_with_stats(f: &CnfFormula, budget: &SolveBudget, seed: u64) -> (SolveResult, SolveStats) {
    let mut s = Solver::new(f.num_vars, seed);
    for c in &f.clauses {
        if !s.add_clause(c) {
            break;
        }
    }
    let r = s.solve(budget);
    (r, s.stats())
}

/// True iff `m` assigns every variable of `f` and satisfies every clause.
pub fn check_model(f: &CnfFormula, m: &Model) -> bool {
    m.num_vars() >= f.num_vars && f.clauses.iter().all(|c| c.iter().any(|&l| m.lit(l)))
}
