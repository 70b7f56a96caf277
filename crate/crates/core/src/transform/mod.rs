//! Program-to-program rewrites used by the checking pipeline.
//!
//! Feature omission and feature requirement build the variant programs a
//! swarm run checks; inlining, unrolling and SSA conversion turn a variant
//! into the loop-free single-assignment form the encoder consumes.

mod inline;
pub mod ssa;
mod unroll;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::frontend::*;

pub use inline::inline_calls;
pub use ssa::{to_ssa, SsaProgram};
pub use unroll::unroll;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature `{0}` is both omitted and required")]
    ConflictingFeature(String),
    #[error("unwind bound must be at least 1")]
    ZeroUnwind,
    #[error("program has no entry function")]
    MissingEntry,
}

/// A feature-restricted rewrite of a base program.
#[derive(Debug, Clone)]
pub struct VariantProgram {
    pub base: Program,
    pub omitted: FeatureSet,
    pub required: FeatureSet,
    /// The rewritten program; contains no `log` statements.
    pub program: Program,
}

/// Applies `f` bottom-up to every statement of `block`, splicing in the
/// statements it returns.
pub(crate) fn rewrite_block(block: Vec<Stmt>, f: &mut impl FnMut(Stmt) -> Vec<Stmt>) -> Vec<Stmt> {
    let mut out = Vec::with_capacity(block.len());
    for mut s in block {
        match &mut s.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                *then_branch = rewrite_block(std::mem::take(then_branch), f);
                *else_branch = rewrite_block(std::mem::take(else_branch), f);
            }
            StmtKind::While { body, .. } | StmtKind::For { body, .. } => {
                *body = rewrite_block(std::mem::take(body), f);
            }
            _ => {}
        }
        out.extend(f(s));
    }
    out
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn fresh_global_name(p: &Program, base: &str) -> String {
    let taken: BTreeSet<String> = p
        .globals
        .iter()
        .map(|g| g.name.clone())
        .chain(p.all_statements().iter().filter_map(|s| match &s.kind {
            StmtKind::Decl { name, .. } => Some(name.clone()),
            _ => None,
        }))
        .chain(p.functions.iter().flat_map(|f| f.params.clone()))
        .collect();
    let mut name = base.to_string();
    let mut n = 1;
    while taken.contains(&name) {
        name = format!("{base}_{n}");
        n += 1;
    }
    name
}

/// Builds the variant in which `omitted` logs block execution, `required`
/// logs must each be reached before the trace ends, and all other logs are
/// deleted.
pub fn build_variant(
    p: &Program,
    omitted: &FeatureSet,
    required: &FeatureSet,
) -> Result<VariantProgram, TransformError> {
    let features = extract_features(p);
    if let Some(l) = omitted.difference(&features).next() {
        return Err(TransformError::UnknownFeature(l.to_string()));
    }
    if let Some(l) = required.difference(&features).next() {
        return Err(TransformError::UnknownFeature(l.to_string()));
    }
    if let Some(l) = omitted.iter().find(|l| required.contains(l)) {
        return Err(TransformError::ConflictingFeature(l.to_string()));
    }
    let main_id = p
        .entry_function()
        .ok_or(TransformError::MissingEntry)?
        .id;

    let mut out = p.clone();
    let mut flags: Vec<(String, String)> = Vec::new();
    for l in required.iter() {
        let name = fresh_global_name(&out, &format!("__seen_{}", sanitize(l)));
        let id = out.fresh_id_from(main_id);
        out.globals.push(VarDecl {
            id,
            name: name.clone(),
            size: None,
            init: None,
        });
        flags.push((l.to_string(), name));
    }

    for f in &mut out.functions {
        let body = std::mem::take(&mut f.body);
        f.body = rewrite_block(body, &mut |s| match &s.kind {
            StmtKind::Log(l) if omitted.contains(l) => vec![Stmt {
                id: s.id,
                kind: StmtKind::Assume(Expr::Bool(false)),
            }],
            StmtKind::Log(l) => match flags.iter().find(|(label, _)| label == l) {
                Some((_, flag)) => vec![Stmt {
                    id: s.id,
                    kind: StmtKind::Assign {
                        target: LValue::Var(flag.clone()),
                        value: Expr::Int(1),
                    },
                }],
                None => vec![],
            },
            _ => vec![s],
        });
    }

    if !flags.is_empty() {
        let cond = flags
            .iter()
            .map(|(_, flag)| Expr::binary(BinOp::Eq, Expr::var(flag.clone()), Expr::Int(1)))
            .reduce(|a, b| Expr::binary(BinOp::And, a, b))
            .expect("non-empty");
        let assume_id = out.fresh_id_from(main_id);
        let end_id = out.fresh_id_from(main_id);
        out.entry_function_mut()
            .expect("entry exists")
            .body
            .push(Stmt {
                id: assume_id,
                kind: StmtKind::Assume(cond.clone()),
            });
        out.end_assumes.push(EndAssume { id: end_id, cond });
    }

    Ok(VariantProgram {
        base: p.clone(),
        omitted: omitted.clone(),
        required: required.clone(),
        program: out,
    })
}

/// Replaces `log(l)` by `assume(false)` for every omitted `l` and deletes
/// every other log.
pub fn omit_features(p: &Program, omitted: &FeatureSet) -> Result<VariantProgram, TransformError> {
    build_variant(p, omitted, &FeatureSet::new())
}

/// Restricts traces to those reaching every required log before they end.
pub fn require_features(
    p: &Program,
    required: &FeatureSet,
) -> Result<VariantProgram, TransformError> {
    build_variant(p, &FeatureSet::new(), required)
}

/// Inserts `assume(x == d1 || x == d2 ...)` after every `x = havoc();` whose
/// variable has a restricted domain. Lets the symbolic pipeline explore the
/// same input space as a restricted brute-force enumeration.
pub fn restrict_havocs(p: &Program, domain: &crate::interp::HavocDomain) -> Program {
    use crate::interp::HavocDomain;
    let mut out = p.clone();
    let mut functions = std::mem::take(&mut out.functions);
    for f in &mut functions {
        let body = std::mem::take(&mut f.body);
        f.body = rewrite_block(body, &mut |s| {
            let StmtKind::Havoc(var) = &s.kind else {
                return vec![s];
            };
            let values = match domain {
                HavocDomain::Full => None,
                HavocDomain::Values(v) => Some(v.clone()),
                HavocDomain::PerVariable { vars, default } => {
                    vars.get(var).cloned().or_else(|| default.clone())
                }
            };
            let Some(values) = values else {
                return vec![s];
            };
            let cond = values
                .iter()
                .map(|&v| {
                    let lit = if v < 0 {
                        Expr::Unary(UnOp::Neg, Box::new(Expr::Int(v.wrapping_neg())))
                    } else {
                        Expr::Int(v)
                    };
                    Expr::binary(BinOp::Eq, Expr::var(var.clone()), lit)
                })
                .reduce(|a, b| Expr::binary(BinOp::Or, a, b))
                .unwrap_or(Expr::Bool(false));
            let id = out.fresh_id_from(s.id);
            vec![
                s,
                Stmt {
                    id,
                    kind: StmtKind::Assume(cond),
                },
            ]
        });
    }
    out.functions = functions;
    out
}
