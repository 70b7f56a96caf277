use std::collections::BTreeSet;

use crate::frontend::*;

/// Replaces every call in the entry function by a renamed copy of the
/// callee's body. Callee locals become `f$n$x`; values flow back through
/// `f$n$ret`. Functions other than the entry are dropped.
///
/// The program must be valid (in particular free of recursion).
pub fn inline_calls(p: &Program) -> Program {
    let mut out = p.clone();
    let Some(main) = p.entry_function().cloned() else {
        return out;
    };
    let mut counter = 0u32;
    let body = inline_block(&mut out, p, &main.body, &mut counter);
    out.functions = vec![FunctionDef { body, ..main }];
    out
}

fn inline_block(out: &mut Program, src: &Program, block: &[Stmt], counter: &mut u32) -> Vec<Stmt> {
    let mut res = Vec::with_capacity(block.len());
    for s in block {
        match &s.kind {
            StmtKind::Call { dest, func, args } => {
                res.extend(expand_call(out, src, s.id, dest.as_deref(), func, args, counter));
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => res.push(Stmt {
                id: s.id,
                kind: StmtKind::If {
                    cond: cond.clone(),
                    then_branch: inline_block(out, src, then_branch, counter),
                    else_branch: inline_block(out, src, else_branch, counter),
                },
            }),
            StmtKind::While { cond, body } => res.push(Stmt {
                id: s.id,
                kind: StmtKind::While {
                    cond: cond.clone(),
                    body: inline_block(out, src, body, counter),
                },
            }),
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                let is_call = |s: &Option<Box<Stmt>>| {
                    s.as_deref()
                        .is_some_and(|s| matches!(s.kind, StmtKind::Call { .. }))
                };
                if is_call(init) || is_call(step) {
                    // a call in the header: fall back to init; while (cond) { body; step }
                    if let Some(init) = init {
                        res.extend(inline_block(out, src, std::slice::from_ref(init), counter));
                    }
                    let mut new_body = inline_block(out, src, body, counter);
                    if let Some(step) = step {
                        new_body.extend(inline_block(out, src, std::slice::from_ref(step), counter));
                    }
                    res.push(Stmt {
                        id: s.id,
                        kind: StmtKind::While {
                            cond: cond.clone(),
                            body: new_body,
                        },
                    });
                } else {
                    res.push(Stmt {
                        id: s.id,
                        kind: StmtKind::For {
                            init: init.clone(),
                            cond: cond.clone(),
                            step: step.clone(),
                            body: inline_block(out, src, body, counter),
                        },
                    });
                }
            }
            _ => res.push(s.clone()),
        }
    }
    res
}

fn local_names(f: &FunctionDef) -> BTreeSet<String> {
    let mut names: BTreeSet<String> = f.params.iter().cloned().collect();
    walk_block(&f.body, &mut |s| {
        if let StmtKind::Decl { name, .. } = &s.kind {
            names.insert(name.clone());
        }
    });
    names
}

/// Copies `s` with renamed variables and fresh ids pointing back at the
/// originals.
fn copy_renamed(out: &mut Program, s: &Stmt, map: &impl Fn(&str) -> String) -> Stmt {
    let id = out.fresh_id_from(s.id);
    let block = |out: &mut Program, b: &[Stmt]| -> Vec<Stmt> {
        b.iter().map(|s| copy_renamed(out, s, map)).collect()
    };
    let kind = match &s.kind {
        StmtKind::Decl { name, size, init } => StmtKind::Decl {
            name: map(name),
            size: size.clone(),
            init: init.as_ref().map(|e| e.rename(map)),
        },
        StmtKind::Assign { target, value } => StmtKind::Assign {
            target: match target {
                LValue::Var(v) => LValue::Var(map(v)),
                LValue::Index(a, i) => LValue::Index(map(a), i.rename(map)),
            },
            value: value.rename(map),
        },
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => StmtKind::If {
            cond: cond.rename(map),
            then_branch: block(out, then_branch),
            else_branch: block(out, else_branch),
        },
        StmtKind::While { cond, body } => StmtKind::While {
            cond: cond.rename(map),
            body: block(out, body),
        },
        StmtKind::For {
            init,
            cond,
            step,
            body,
        } => StmtKind::For {
            init: init.as_ref().map(|s| Box::new(copy_renamed(out, s, map))),
            cond: cond.rename(map),
            step: step.as_ref().map(|s| Box::new(copy_renamed(out, s, map))),
            body: block(out, body),
        },
        StmtKind::Call { dest, func, args } => StmtKind::Call {
            dest: dest.as_ref().map(|d| map(d)),
            func: func.clone(),
            args: args.iter().map(|a| a.rename(map)).collect(),
        },
        StmtKind::Return(e) => StmtKind::Return(e.as_ref().map(|e| e.rename(map))),
        StmtKind::Assert(e) => StmtKind::Assert(e.rename(map)),
        StmtKind::Assume(e) => StmtKind::Assume(e.rename(map)),
        StmtKind::Log(l) => StmtKind::Log(l.clone()),
        StmtKind::Havoc(v) => StmtKind::Havoc(map(v)),
    };
    Stmt { id, kind }
}

fn only_final_return(body: &[Stmt]) -> bool {
    let mut count = 0;
    walk_block(body, &mut |s| {
        if matches!(s.kind, StmtKind::Return(_)) {
            count += 1;
        }
    });
    count == 0 || (count == 1 && matches!(body.last().map(|s| &s.kind), Some(StmtKind::Return(_))))
}

fn contains_return(s: &Stmt) -> bool {
    let mut found = false;
    s.walk(&mut |s| found |= matches!(s.kind, StmtKind::Return(_)));
    found
}

struct ReturnCtx<'a> {
    ret: Option<&'a str>,
    done: &'a str,
}

impl ReturnCtx<'_> {
    fn lower_return(&self, out: &mut Program, id: StmtId, e: &Option<Expr>, flag: bool) -> Vec<Stmt> {
        let mut res = Vec::new();
        if let (Some(e), Some(ret)) = (e, self.ret) {
            res.push(Stmt {
                id,
                kind: StmtKind::Assign {
                    target: LValue::Var(ret.to_string()),
                    value: e.clone(),
                },
            });
        }
        if flag {
            let id = if res.is_empty() { id } else { out.fresh_id_from(id) };
            res.push(Stmt {
                id,
                kind: StmtKind::Assign {
                    target: LValue::Var(self.done.to_string()),
                    value: Expr::Int(1),
                },
            });
        }
        res
    }

    fn not_done(&self) -> Expr {
        Expr::binary(BinOp::Eq, Expr::var(self.done), Expr::Int(0))
    }

    /// Rewrites returns into assignments to the done flag, guarding every
    /// statement that may follow a return.
    fn block(&self, out: &mut Program, block: Vec<Stmt>) -> Vec<Stmt> {
        let mut res = Vec::new();
        let mut iter = block.into_iter();
        while let Some(s) = iter.next() {
            let may_return = contains_return(&s);
            let id = s.id;
            res.extend(self.stmt(out, s));
            if may_return {
                let rest = self.block(out, iter.collect());
                if !rest.is_empty() {
                    let guard_id = out.fresh_id_from(id);
                    res.push(Stmt {
                        id: guard_id,
                        kind: StmtKind::If {
                            cond: self.not_done(),
                            then_branch: rest,
                            else_branch: vec![],
                        },
                    });
                }
                break;
            }
        }
        res
    }

    fn stmt(&self, out: &mut Program, s: Stmt) -> Vec<Stmt> {
        let and_not_done = |c: Expr| Expr::binary(BinOp::And, c, self.not_done());
        let kind = match s.kind {
            StmtKind::Return(e) => return self.lower_return(out, s.id, &e, true),
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => StmtKind::If {
                cond,
                then_branch: self.block(out, then_branch),
                else_branch: self.block(out, else_branch),
            },
            StmtKind::While { cond, body } if body.iter().any(contains_return) => {
                StmtKind::While {
                    cond: and_not_done(cond),
                    body: self.block(out, body),
                }
            }
            StmtKind::For {
                init,
                cond,
                step,
                mut body,
            } if body.iter().any(contains_return) => {
                let mut res: Vec<Stmt> = init.map(|s| *s).into_iter().collect();
                body.extend(step.map(|s| *s));
                res.push(Stmt {
                    id: s.id,
                    kind: StmtKind::While {
                        cond: and_not_done(cond),
                        body: self.block(out, body),
                    },
                });
                return res;
            }
            other => other,
        };
        vec![Stmt { id: s.id, kind }]
    }
}

fn expand_call(
    out: &mut Program,
    src: &Program,
    call_id: StmtId,
    dest: Option<&str>,
    func: &str,
    args: &[Expr],
    counter: &mut u32,
) -> Vec<Stmt> {
    let Some(f) = src.function(func) else {
        return vec![];
    };
    let n = *counter;
    *counter += 1;
    let prefix = format!("{func}${n}$");
    let locals = local_names(f);
    let map = |name: &str| {
        if locals.contains(name) {
            format!("{prefix}{name}")
        } else {
            name.to_string()
        }
    };

    let mut res = Vec::new();
    for (param, arg) in f.params.iter().zip(args) {
        let id = out.fresh_id_from(call_id);
        res.push(Stmt {
            id,
            kind: StmtKind::Decl {
                name: map(param),
                size: None,
                init: Some(arg.clone()),
            },
        });
    }
    let ret = f.returns_value().then(|| format!("{prefix}ret"));
    if let Some(ret) = &ret {
        let id = out.fresh_id_from(call_id);
        res.push(Stmt {
            id,
            kind: StmtKind::Decl {
                name: ret.clone(),
                size: None,
                init: None,
            },
        });
    }

    let body: Vec<Stmt> = f.body.iter().map(|s| copy_renamed(out, s, &map)).collect();
    let done = format!("{prefix}done");
    let ctx = ReturnCtx {
        ret: ret.as_deref(),
        done: &done,
    };
    let body = if only_final_return(&f.body) {
        let mut body = body;
        if let Some(Stmt {
            id,
            kind: StmtKind::Return(e),
        }) = body.last().cloned()
        {
            body.pop();
            body.extend(ctx.lower_return(out, id, &e, false));
        }
        body
    } else {
        let id = out.fresh_id_from(call_id);
        res.push(Stmt {
            id,
            kind: StmtKind::Decl {
                name: done.clone(),
                size: None,
                init: None,
            },
        });
        ctx.block(out, body)
    };
    res.extend(inline_block(out, src, &body, counter));

    if let (Some(dest), Some(ret)) = (dest, &ret) {
        let id = out.fresh_id_from(call_id);
        res.push(Stmt {
            id,
            kind: StmtKind::Assign {
                target: LValue::Var(dest.to_string()),
                value: Expr::var(ret.clone()),
            },
        });
    }
    res
}
