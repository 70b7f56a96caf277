use std::collections::BTreeMap;
use std::ops::ControlFlow;

use thiserror::Error;

use super::{execute_with, ExecConfig, ExecutionOutcome, NondetTape, OutcomeKind};
use crate::frontend::*;
use crate::value::Width;

/// Upper bound on `domain size ^ havocs per path` accepted by [`enumerate`].
pub const MAX_TAPE_SPACE: f64 = 1e7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumerateError {
    #[error("tape space {0:.3e} exceeds the oracle limit of 1e7")]
    SpaceTooLarge(f64),
}

/// Candidate values for havoc statements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum HavocDomain {
    /// Every value representable at the program width.
    #[default]
    Full,
    /// The same list for every havoc.
    Values(Vec<i64>),
    /// Per target variable; variables not listed use `default`, or the full
    /// range when `default` is `None`.
    PerVariable {
        vars: BTreeMap<String, Vec<i64>>,
        default: Option<Vec<i64>>,
    },
}

impl HavocDomain {
    pub fn per_variable<S: Into<String>>(
        vars: impl IntoIterator<Item = (S, Vec<i64>)>,
    ) -> HavocDomain {
        HavocDomain::PerVariable {
            vars: vars.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            default: None,
        }
    }

    pub fn values_for(&self, var: &str, width: Width) -> Vec<i64> {
        let full = || width.all_values().collect::<Vec<_>>();
        let list = match self {
            HavocDomain::Full => full(),
            HavocDomain::Values(v) => v.clone(),
            HavocDomain::PerVariable { vars, default } => match (vars.get(var), default) {
                (Some(v), _) => v.clone(),
                (None, Some(d)) => d.clone(),
                (None, None) => full(),
            },
        };
        let mut wrapped: Vec<i64> = Vec::with_capacity(list.len());
        for v in list.into_iter().map(|v| width.wrap(v)) {
            if !wrapped.contains(&v) {
                wrapped.push(v);
            }
        }
        wrapped
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    /// The lexicographically first tape reaching an assertion violation.
    Fails {
        tape: NondetTape,
        outcome: ExecutionOutcome,
    },
    SafeWithinBound { tapes: u64 },
}

impl OracleVerdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, OracleVerdict::Fails { .. })
    }
}

/// Largest number of havocs any execution can perform when every loop runs
/// at most `k` iterations per entry.
pub fn max_havocs(p: &Program, k: u32) -> u64 {
    path_cost(p, k, &|_| 1.0) as u64
}

/// Upper bound on the number of tapes [`explore`] visits.
pub fn tape_space(p: &Program, k: u32, width: Width, domain: &HavocDomain) -> f64 {
    path_cost(p, k, &|var| (domain.values_for(var, width).len().max(1) as f64).ln()).exp()
}

/// Maximum over execution paths of the summed havoc costs.
fn path_cost(p: &Program, k: u32, cost: &dyn Fn(&str) -> f64) -> f64 {
    fn block(p: &Program, stmts: &[Stmt], k: f64, depth: usize, cost: &dyn Fn(&str) -> f64) -> f64 {
        stmts.iter().map(|s| stmt(p, s, k, depth, cost)).sum()
    }
    fn stmt(p: &Program, s: &Stmt, k: f64, depth: usize, cost: &dyn Fn(&str) -> f64) -> f64 {
        if depth > 64 {
            return 0.0;
        }
        let opt = |s: &Option<Box<Stmt>>| s.as_deref().map_or(0.0, |s| stmt(p, s, k, depth, cost));
        match &s.kind {
            StmtKind::Havoc(var) => cost(var),
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => block(p, then_branch, k, depth, cost).max(block(p, else_branch, k, depth, cost)),
            StmtKind::While { body, .. } => k * block(p, body, k, depth, cost),
            StmtKind::For {
                init, body, step, ..
            } => opt(init) + k * (block(p, body, k, depth, cost) + opt(step)),
            StmtKind::Call { func, .. } => p
                .function(func)
                .map_or(0.0, |f| block(p, &f.body, k, depth + 1, cost)),
            _ => 0.0,
        }
    }
    p.entry_function()
        .map_or(0.0, |f| block(p, &f.body, k as f64, 0, cost))
}

/// Visits every complete execution of `p` (loops bounded by `k`) in
/// lexicographic tape order until `visit` breaks. Returns the number of
/// leaves visited.
pub fn explore(
    p: &Program,
    k: u32,
    width: Width,
    domain: &HavocDomain,
    mut visit: impl FnMut(&NondetTape, &ExecutionOutcome) -> ControlFlow<()>,
) -> Result<u64, EnumerateError> {
    let space = tape_space(p, k, width, domain);
    if space > MAX_TAPE_SPACE {
        return Err(EnumerateError::SpaceTooLarge(space));
    }
    let cfg = ExecConfig {
        loop_bound: Some(k),
        ..ExecConfig::new(width)
    };
    let mut leaves = 0u64;
    let mut prefix = Vec::new();
    let _ = go(p, &cfg, domain, &mut prefix, &mut leaves, &mut visit);
    Ok(leaves)
}

fn go(
    p: &Program,
    cfg: &ExecConfig,
    domain: &HavocDomain,
    prefix: &mut Vec<i64>,
    leaves: &mut u64,
    visit: &mut impl FnMut(&NondetTape, &ExecutionOutcome) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let out = execute_with(p, prefix, cfg);
    match &out.kind {
        OutcomeKind::TapeExhausted { var, .. } => {
            for v in domain.values_for(var, cfg.width) {
                prefix.push(v);
                let flow = go(p, cfg, domain, prefix, leaves, visit);
                prefix.pop();
                flow?;
            }
            ControlFlow::Continue(())
        }
        _ => {
            *leaves += 1;
            let tape = NondetTape {
                values: prefix.clone(),
                width: cfg.width,
            };
            visit(&tape, &out)
        }
    }
}

/// Brute-force bounded verdict: the first failing tape in lexicographic
/// order, or safety within `k` loop iterations.
pub fn enumerate(
    p: &Program,
    k: u32,
    width: Width,
    domain: &HavocDomain,
) -> Result<OracleVerdict, EnumerateError> {
    let mut found = None;
    let tapes = explore(p, k, width, domain, |tape, out| {
        if matches!(out.kind, OutcomeKind::AssertionViolation { .. }) {
            found = Some((tape.clone(), out.clone()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match found {
        Some((tape, outcome)) => OracleVerdict::Fails { tape, outcome },
        None => OracleVerdict::SafeWithinBound { tapes },
    })
}
