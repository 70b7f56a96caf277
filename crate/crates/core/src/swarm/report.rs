use std::fmt::Write as _;

use serde_json::{json, Value};

use super::SwarmConfig;
use crate::bmc::{Counterexample, OutcomeKind, ResourceReason, VerificationOutcome};

/// The aggregated result of a swarm run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A counterexample of some variant, which is also one of the program.
    Falsified {
        config: SwarmConfig,
        counterexample: Box<Counterexample>,
    },
    /// The baseline (nothing omitted) was verified.
    VerifiedToDepth(u32),
    /// No counterexample, and these variants were verified.
    PartiallyVerified(Vec<SwarmConfig>),
    Inconclusive,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Falsified { .. } => "falsified",
            Verdict::VerifiedToDepth(_) => "verified_to_depth",
            Verdict::PartiallyVerified(_) => "partially_verified",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Strength order used for monotonicity: more results never lower it.
    pub fn rank(&self) -> u8 {
        match self {
            Verdict::Inconclusive => 0,
            Verdict::PartiallyVerified(_) => 1,
            Verdict::VerifiedToDepth(_) => 2,
            Verdict::Falsified { .. } => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Falsified {
                config,
                counterexample,
            } => json!({
                "kind": self.kind(),
                "config": config.omitted.to_vec(),
                "violated_assert": {
                    "file": counterexample.file,
                    "line": counterexample.line,
                },
            }),
            Verdict::VerifiedToDepth(k) => json!({ "kind": self.kind(), "depth": k }),
            Verdict::PartiallyVerified(cs) => json!({
                "kind": self.kind(),
                "verified": cs.iter().map(|c| c.omitted.to_vec()).collect::<Vec<_>>(),
            }),
            Verdict::Inconclusive => json!({ "kind": self.kind() }),
        }
    }
}

/// Combines per-config results, given in the order they completed.
pub fn aggregate(results: &[(SwarmConfig, VerificationOutcome)], include_baseline_ran: bool) -> Verdict {
    if let Some((config, cex)) = results
        .iter()
        .find_map(|(c, o)| o.counterexample().map(|x| (c, x)))
    {
        return Verdict::Falsified {
            config: config.clone(),
            counterexample: Box::new(cex.clone()),
        };
    }
    if include_baseline_ran {
        if let Some(depth) = results.iter().find_map(|(c, o)| match o.kind {
            OutcomeKind::Verified { depth } if c.is_baseline() => Some(depth),
            _ => None,
        }) {
            return Verdict::VerifiedToDepth(depth);
        }
    }
    let verified: Vec<SwarmConfig> = results
        .iter()
        .filter(|(_, o)| o.is_verified())
        .map(|(c, _)| c.clone())
        .collect();
    if verified.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::PartiallyVerified(verified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwarmReport {
    /// Results in config order.
    pub per_config: Vec<(SwarmConfig, VerificationOutcome)>,
    pub verdict: Verdict,
    pub wall_time_ms: u64,
    pub seed: u64,
}

pub(crate) fn status(o: &VerificationOutcome) -> &'static str {
    match o.kind {
        OutcomeKind::Counterexample(_) => "counterexample",
        OutcomeKind::Verified { .. } => "verified",
        OutcomeKind::ResourceOut(_) => "resource_out",
    }
}

fn reason_name(r: ResourceReason) -> &'static str {
    match r {
        ResourceReason::ConflictLimit => "conflict limit",
        ResourceReason::TimeLimit => "time limit",
        ResourceReason::Cancelled => "cancelled",
        ResourceReason::ReplayFailed => "replay failed",
    }
}

impl SwarmReport {
    pub fn to_json(&self) -> Value {
        let configs: Vec<Value> = self
            .per_config
            .iter()
            .map(|(c, o)| {
                let mut entry = json!({
                    "omitted": c.omitted.to_vec(),
                    "status": status(o),
                    "metrics": {
                        "vars": o.metrics.vars,
                        "clauses": o.metrics.clauses,
                        "solve_ms": o.metrics.solve_ms,
                    },
                    "counterexample": o.counterexample().map(|x| x.to_json()),
                });
                if let OutcomeKind::ResourceOut(r) = o.kind {
                    entry["reason"] = json!(r);
                }
                entry
            })
            .collect();
        json!({
            "seed": self.seed,
            "verdict": self.verdict.to_json(),
            "configs": configs,
            "wall_time_ms": self.wall_time_ms,
        })
    }

    /// Plain-text table with one row per config.
    pub fn table(&self) -> String {
        let rows: Vec<[String; 5]> = self
            .per_config
            .iter()
            .map(|(c, o)| {
                let status = match &o.kind {
                    OutcomeKind::Counterexample(x) => format!("Counterexample (line {})", x.line),
                    OutcomeKind::Verified { .. } => "Verified".to_string(),
                    OutcomeKind::ResourceOut(r) => format!("Resource out ({})", reason_name(*r)),
                };
                [
                    c.label(),
                    status,
                    o.metrics.vars.to_string(),
                    o.metrics.clauses.to_string(),
                    o.metrics.solve_ms.to_string(),
                ]
            })
            .collect();
        let header = ["Omitted Feature", "Status", "vars", "clauses", "solve ms"].map(String::from);
        let mut widths = header.clone().map(|h| h.len());
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for r in std::iter::once(&header).chain(&rows) {
            let line = r
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (cell, w))| {
                    if i < 2 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect::<Vec<_>>()
                .join("  ");
            let _ = writeln!(out, "{}", line.trim_end());
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.kind());
        out
    }
}
