use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::*;
use crate::interp::{execute_with, replay_matching, ExecConfig, NondetTape, OutcomeKind, TraceValue};
use crate::value::Width;

/// One step of a counterexample trace: the state after a source line ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub line: u32,
    pub vars: BTreeMap<String, TraceValue>,
}

/// A concrete failing execution found for one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub omitted: FeatureSet,
    pub required: FeatureSet,
    pub depth: u32,
    pub tape: NondetTape,
    /// The violated check, as a statement of the original program.
    pub violated_assert: StmtId,
    pub file: String,
    pub line: u32,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CexError {
    #[error("malformed counterexample: {0}")]
    Malformed(String),
    #[error("no statement on line {0}")]
    UnknownLine(u32),
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    omitted: Vec<String>,
    required: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct LocJson {
    file: String,
    line: u32,
}

#[derive(Serialize, Deserialize)]
struct CexJson {
    config: ConfigJson,
    depth: u32,
    tape: Vec<i64>,
    violated_assert: LocJson,
    trace: Vec<TraceStep>,
}

impl Counterexample {
    /// Builds a counterexample for `base`, recording the trace by running
    /// the tape on the original program.
    pub fn build(
        base: &Program,
        omitted: FeatureSet,
        required: FeatureSet,
        depth: u32,
        tape: NondetTape,
        violated_assert: StmtId,
    ) -> Counterexample {
        let cfg = ExecConfig {
            record_trace: true,
            ..ExecConfig::new(tape.width)
        };
        let out = execute_with(base, &tape.values, &cfg);
        let line_of = |id: StmtId| base.loc(id).map_or(0, |l| l.line);
        let trace = out
            .trace
            .into_iter()
            .map(|e| TraceStep {
                line: line_of(e.stmt),
                vars: e.vars,
            })
            .collect();
        Counterexample {
            omitted,
            required,
            depth,
            file: base
                .loc(violated_assert)
                .map_or_else(|| base.file_name().to_string(), |l| l.file.to_string()),
            line: line_of(violated_assert),
            tape,
            violated_assert,
            trace,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = CexJson {
            config: ConfigJson {
                omitted: self.omitted.to_vec(),
                required: self.required.to_vec(),
            },
            depth: self.depth,
            tape: self.tape.values.clone(),
            violated_assert: LocJson {
                file: self.file.clone(),
                line: self.line,
            },
            trace: self.trace.clone(),
        };
        serde_json::to_value(j).expect("counterexample serializes")
    }

    /// Reads a counterexample written by [`Counterexample::to_json`],
    /// resolving the violated line against `p`.
    pub fn from_json(
        v: &serde_json::Value,
        p: &Program,
        width: Width,
    ) -> Result<Counterexample, CexError> {
        let j: CexJson =
            serde_json::from_value(v.clone()).map_err(|e| CexError::Malformed(e.to_string()))?;
        let line = j.violated_assert.line;
        let at_line: Vec<&Stmt> = p
            .all_statements()
            .into_iter()
            .filter(|s| p.loc(s.id).is_some_and(|l| l.line == line))
            .collect();
        let stmt = at_line
            .iter()
            .find(|s| matches!(s.kind, StmtKind::Assert(_)))
            .or(at_line.first())
            .ok_or(CexError::UnknownLine(line))?;
        Ok(Counterexample {
            omitted: j.config.omitted.into_iter().collect(),
            required: j.config.required.into_iter().collect(),
            depth: j.depth,
            tape: NondetTape::new(j.tape, width),
            violated_assert: stmt.id,
            file: j.violated_assert.file,
            line,
            trace: j.trace,
        })
    }

    /// True iff the tape drives `p` into a violation on the recorded line,
    /// consuming the whole tape.
    pub fn replays_on(&self, p: &Program) -> bool {
        replay_matching(p, &self.tape, |p, stmt| {
            p.loc(stmt).is_some_and(|l| l.line == self.line)
        })
    }
}

/// True iff running `tape` on `p` with loops bounded by `depth` violates
/// the check `violated` (as an original statement) and reads the whole tape.
pub fn replays_bounded(p: &Program, tape: &NondetTape, depth: u32, violated: StmtId) -> bool {
    let cfg = ExecConfig {
        loop_bound: Some(depth),
        ..ExecConfig::new(tape.width)
    };
    let out = execute_with(p, &tape.values, &cfg);
    match out.kind {
        OutcomeKind::AssertionViolation { stmt, .. } => {
            p.origin_of(stmt) == violated && out.consumed == tape.len()
        }
        _ => false,
    }
}
