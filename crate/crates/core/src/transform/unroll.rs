use super::TransformError;
use crate::frontend::*;

/// Unrolls every loop `k` times. The innermost copy ends in an unwinding
/// assumption `assume(!cond)`, so the result is sound for executions that
/// run each loop at most `k` times.
///
/// `for (init; cond; step) body` becomes `init` followed by the unrolled
/// `while (cond) { body step }`.
pub fn unroll(p: &Program, k: u32) -> Result<Program, TransformError> {
    if k == 0 {
        return Err(TransformError::ZeroUnwind);
    }
    let mut out = p.clone();
    let mut functions = std::mem::take(&mut out.functions);
    for f in &mut functions {
        let body = std::mem::take(&mut f.body);
        f.body = unroll_block(&mut out, body, k);
    }
    out.functions = functions;
    Ok(out)
}

fn unroll_block(out: &mut Program, block: Vec<Stmt>, k: u32) -> Vec<Stmt> {
    let mut res = Vec::with_capacity(block.len());
    for s in block {
        match s.kind {
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => res.push(Stmt {
                id: s.id,
                kind: StmtKind::If {
                    cond,
                    then_branch: unroll_block(out, then_branch, k),
                    else_branch: unroll_block(out, else_branch, k),
                },
            }),
            StmtKind::While { cond, body } => {
                let body = unroll_block(out, body, k);
                res.extend(unroll_loop(out, s.id, &cond, &body, k));
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                res.extend(init.map(|s| *s));
                let mut body = unroll_block(out, body, k);
                body.extend(step.map(|s| *s));
                res.extend(unroll_loop(out, s.id, &cond, &body, k));
            }
            kind => res.push(Stmt { id: s.id, kind }),
        }
    }
    res
}

fn unroll_loop(out: &mut Program, id: StmtId, cond: &Expr, body: &[Stmt], left: u32) -> Vec<Stmt> {
    let id = out.fresh_id_from(id);
    if left == 0 {
        return vec![Stmt {
            id,
            kind: StmtKind::Assume(Expr::not(cond.clone())),
        }];
    }
    let mut then_branch: Vec<Stmt> = body.iter().map(|s| copy_fresh(out, s)).collect();
    then_branch.extend(unroll_loop(out, id, cond, body, left - 1));
    vec![Stmt {
        id,
        kind: StmtKind::If {
            cond: cond.clone(),
            then_branch,
            else_branch: vec![],
        },
    }]
}

fn copy_fresh(out: &mut Program, s: &Stmt) -> Stmt {
    let mut copy = s.clone();
    copy.walk_mut(&mut |s| s.id = out.fresh_id_from(s.id));
    copy
}
