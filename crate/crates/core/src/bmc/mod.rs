//! Bounded model checking of one feature configuration.

mod counterexample;

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::encode::{encode, slice, EncodedInstance};
use crate::frontend::*;
use crate::interp::{replay, NondetTape};
use crate::sat::{self, Model, SolveBudget, SolveResult, UnknownReason};
use crate::transform::ssa::{SsaError, SsaProgram};
use crate::transform::{build_variant, inline_calls, to_ssa, unroll, TransformError, VariantProgram};
use crate::value::Width;

pub use counterexample::{replays_bounded, CexError, Counterexample, TraceStep};

pub const DEFAULT_DEPTH: u32 = 8;

#[derive(Debug, Clone)]
pub struct BmcOptions {
    /// Loop unwinding bound.
    pub depth: u32,
    pub width: Width,
    pub omitted: FeatureSet,
    pub required: FeatureSet,
    pub max_conflicts: Option<u64>,
    pub timeout: Option<Duration>,
    pub seed: u64,
    /// Apply cone-of-influence slicing before encoding.
    pub slice: bool,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for BmcOptions {
    fn default() -> Self {
        BmcOptions {
            depth: DEFAULT_DEPTH,
            width: Width::DEFAULT,
            omitted: FeatureSet::new(),
            required: FeatureSet::new(),
            max_conflicts: None,
            timeout: None,
            seed: 0,
            slice: true,
            cancel: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BmcError {
    #[error("invalid program: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<SemanticError>),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Ssa(#[from] SsaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceReason {
    ConflictLimit,
    TimeLimit,
    Cancelled,
    /// The solver's model did not replay as a real execution.
    ReplayFailed,
}

impl From<UnknownReason> for ResourceReason {
    fn from(r: UnknownReason) -> Self {
        match r {
            UnknownReason::ConflictLimit => ResourceReason::ConflictLimit,
            UnknownReason::TimeLimit => ResourceReason::TimeLimit,
            UnknownReason::Cancelled => ResourceReason::Cancelled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeKind {
    Counterexample(Box<Counterexample>),
    /// No violation within `depth` loop iterations.
    Verified { depth: u32 },
    ResourceOut(ResourceReason),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub vars: u32,
    pub clauses: usize,
    pub sliced: bool,
    pub solve_ms: u64,
    pub total_ms: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub kind: OutcomeKind,
    pub metrics: Metrics,
}

impl VerificationOutcome {
    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.kind {
            OutcomeKind::Counterexample(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self.kind, OutcomeKind::Verified { .. })
    }
}

/// Every intermediate artifact of the pipeline for one configuration.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub variant: VariantProgram,
    pub unrolled: Program,
    pub ssa: SsaProgram,
    pub sliced: SsaProgram,
    pub instance: EncodedInstance,
    pub depth: u32,
}

/// Runs the pipeline up to (not including) solving.
pub fn prepare(p: &Program, opts: &BmcOptions) -> Result<Prepared, BmcError> {
    let errors = validate(p);
    if !errors.is_empty() {
        return Err(BmcError::Invalid(errors));
    }
    let variant = build_variant(p, &opts.omitted, &opts.required)?;
    let unrolled = unroll(&inline_calls(&variant.program), opts.depth)?;
    let mut ssa = to_ssa(&unrolled, opts.width)?;
    ssa.unwind_bound = opts.depth;
    let (sliced, changed) = if opts.slice {
        slice(&ssa)
    } else {
        (ssa.clone(), false)
    };
    let instance = encode(&sliced, changed);
    Ok(Prepared {
        variant,
        unrolled,
        ssa,
        sliced,
        instance,
        depth: opts.depth,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("model selects no violated check")]
    NoViolatedSelector,
}

/// Reads the nondeterministic inputs from a model and evaluates the full
/// SSA to find the tape and the violated check (as an original statement).
pub fn decode_model(prep: &Prepared, model: &Model) -> Result<(NondetTape, StmtId), DecodeError> {
    let inst = &prep.instance;
    let input = |n| inst.int_value(n, |l| model.lit(l));
    let vals = prep.ssa.evaluate(&input);
    let idx = prep.ssa.violated(&vals).ok_or(DecodeError::NoViolatedSelector)?;
    let tape: Vec<i64> = prep
        .ssa
        .nondets
        .iter()
        .filter(|n| vals[n.guard.0 as usize] != 0)
        .map(|n| vals[n.name.0 as usize])
        .collect();
    Ok((NondetTape::new(tape, prep.ssa.width), prep.ssa.asserts[idx].source))
}

/// Checks `p` under one configuration.
pub fn check(p: &Program, opts: &BmcOptions) -> Result<VerificationOutcome, BmcError> {
    let start = Instant::now();
    let prep = prepare(p, opts)?;
    Ok(solve_prepared(p, &prep, opts, start))
}

pub(crate) fn solve_prepared(
    p: &Program,
    prep: &Prepared,
    opts: &BmcOptions,
    start: Instant,
) -> VerificationOutcome {
    let budget = SolveBudget {
        max_conflicts: opts.max_conflicts,
        max_time: opts.timeout.map(|t| t.saturating_sub(start.elapsed())),
        cancel: opts.cancel.clone(),
    };
    let solve_start = Instant::now();
    let (result, stats) = sat::solve_with_stats(&prep.instance.cnf, &budget, opts.seed);
    let solve_ms = solve_start.elapsed().as_millis() as u64;
    let kind = match result {
        SolveResult::Unsat => OutcomeKind::Verified { depth: opts.depth },
        SolveResult::Unknown(r) => OutcomeKind::ResourceOut(r.into()),
        SolveResult::Sat(model) => match decode_model(prep, &model) {
            Err(_) => OutcomeKind::ResourceOut(ResourceReason::ReplayFailed),
            Ok((tape, violated)) => {
                let cex = Counterexample::build(
                    p,
                    opts.omitted.clone(),
                    opts.required.clone(),
                    opts.depth,
                    tape,
                    violated,
                );
                if replays_bounded(&prep.variant.program, &cex.tape, opts.depth, violated)
                    && replay(p, &cex)
                {
                    OutcomeKind::Counterexample(Box::new(cex))
                } else {
                    OutcomeKind::ResourceOut(ResourceReason::ReplayFailed)
                }
            }
        },
    };
    let s = &prep.instance.stats;
    VerificationOutcome {
        kind,
        metrics: Metrics {
            vars: s.vars,
            clauses: s.clauses,
            sliced: s.sliced,
            solve_ms,
            total_ms: start.elapsed().as_millis() as u64,
            conflicts: stats.conflicts,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str, opts: BmcOptions) -> VerificationOutcome {
        check(&parse(src).unwrap(), &opts).unwrap()
    }

    #[test]
    fn verified_and_falsified() {
        let o = run("func main() { int x; x = havoc(); assert(x * 0 == 0); }", BmcOptions::default());
        assert_eq!(o.kind, OutcomeKind::Verified { depth: DEFAULT_DEPTH });
        let o = run("func main() { int x; x = havoc(); assert(x != 42); }", BmcOptions::default());
        let cex = o.counterexample().expect("counterexample");
        assert_eq!(cex.tape.values, vec![42]);
        assert_eq!(cex.line, 1);
    }

    #[test]
    fn violation_inside_loop() {
        let src = "int a[4];\nfunc main() {\n  int i = 0;\n  while (i < 10) {\n    a[i] = i;\n    i = i + 1;\n  }\n}\n";
        let o = run(src, BmcOptions { depth: 3, ..BmcOptions::default() });
        assert!(o.is_verified(), "{:?}", o.kind);
        let o = run(src, BmcOptions { depth: 5, ..BmcOptions::default() });
        let cex = o.counterexample().expect("counterexample");
        assert_eq!(cex.line, 5);
        assert!(!cex.trace.is_empty());
    }

    #[test]
    fn omitted_feature_blocks_bug() {
        let src = r#"func main() { int x; x = havoc(); if (x == 3) { log("bad"); assert(false); } }"#;
        let o = run(src, BmcOptions::default());
        assert!(o.counterexample().is_some());
        let o = run(
            src,
            BmcOptions {
                omitted: ["bad"].into_iter().collect(),
                ..BmcOptions::default()
            },
        );
        assert!(o.is_verified());
    }

    #[test]
    fn required_feature_restricts_traces() {
        let src = r#"func main() { int x; x = havoc(); if (x == 1) { log("one"); } assert(x != 2); }"#;
        let o = run(
            src,
            BmcOptions {
                required: ["one"].into_iter().collect(),
                ..BmcOptions::default()
            },
        );
        assert!(o.is_verified(), "{:?}", o.kind);
    }

    #[test]
    fn slicing_does_not_change_verdicts() {
        let src = "func main() { int x; int y; x = havoc(); y = havoc(); if (y > 3) { x = x + 1; } assert(x != 10); }";
        for slice in [false, true] {
            let o = run(src, BmcOptions { slice, ..BmcOptions::default() });
            assert!(o.counterexample().is_some());
        }
    }

    #[test]
    fn json_round_trip() {
        let src = "func main() {\n  int x;\n  x = havoc();\n  assert(x != 7);\n}\n";
        let p = parse(src).unwrap();
        let o = check(&p, &BmcOptions::default()).unwrap();
        let cex = o.counterexample().unwrap();
        let j = cex.to_json();
        assert_eq!(j["violated_assert"]["line"], 4);
        assert_eq!(j["tape"], serde_json::json!([7]));
        let back = Counterexample::from_json(&j, &p, Width::DEFAULT).unwrap();
        assert_eq!(&back, cex);
        assert!(back.replays_on(&p));
    }

    #[test]
    fn conflict_budget() {
        let src = "func main() { int x; int y; x = havoc(); y = havoc(); assert(x * y != 12347); }";
        let o = run(
            src,
            BmcOptions {
                width: Width::new(16).unwrap(),
                max_conflicts: Some(1),
                ..BmcOptions::default()
            },
        );
        assert!(matches!(o.kind, OutcomeKind::ResourceOut(_) | OutcomeKind::Counterexample(_)));
    }
}
