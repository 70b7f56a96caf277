use std::collections::HashMap;

use crate::frontend::{BinOp, UnOp};
use crate::transform::ssa::*;
use crate::value::{eval_arith, eval_compare};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Known {
    Int(i64),
    Bool(bool),
    Alias(SsaName),
}

/// Shrinks `ssa` without changing which assertion violations are
/// reachable: guards of `assume(false)` are forced false, constants and
/// copies are propagated, and definitions outside the cone of influence of
/// the checks and assumptions are dropped. The second component reports
/// whether anything was removed.
pub fn slice(ssa: &SsaProgram) -> (SsaProgram, bool) {
    let mut known: HashMap<SsaName, Known> = HashMap::new();
    let mut forced = Vec::new();
    for a in &ssa.assumes {
        if a.cond == SsaExpr::Bool(false) && a.guard != ssa.entry_guard {
            forced.push(a.guard);
        }
    }

    let mut defs = Vec::with_capacity(ssa.defs.len());
    for d in &ssa.defs {
        if forced.contains(&d.name) {
            let expr = fold(ssa, &subst(&d.expr, &known));
            defs.push(SsaDef { expr, ..d.clone() });
            known.insert(d.name, Known::Bool(false));
            continue;
        }
        let expr = if d.expr == SsaExpr::Nondet {
            SsaExpr::Nondet
        } else {
            fold(ssa, &subst(&d.expr, &known))
        };
        match expr {
            SsaExpr::Int(v) => {
                known.insert(d.name, Known::Int(v));
            }
            SsaExpr::Bool(b) => {
                known.insert(d.name, Known::Bool(b));
            }
            SsaExpr::Name(m) if ssa.info(m).ty == ssa.info(d.name).ty => {
                known.insert(d.name, Known::Alias(m));
            }
            _ => {}
        }
        defs.push(SsaDef { expr, ..d.clone() });
    }

    let guard_of = |g: SsaName| -> Option<SsaName> {
        match known.get(&g) {
            Some(Known::Bool(false)) => None,
            Some(Known::Bool(true)) => Some(ssa.entry_guard),
            Some(Known::Alias(m)) => Some(*m),
            _ => Some(g),
        }
    };

    let mut asserts = Vec::new();
    for a in &ssa.asserts {
        let Some(guard) = guard_of(a.guard) else {
            continue;
        };
        let cond = fold(ssa, &subst(&a.cond, &known));
        if cond == SsaExpr::Bool(true) {
            continue;
        }
        asserts.push(SsaAssert {
            guard,
            cond,
            ..a.clone()
        });
    }
    let mut assumes = Vec::new();
    for a in &ssa.assumes {
        let forced_here = a.cond == SsaExpr::Bool(false) && forced.contains(&a.guard);
        let guard = if forced_here { Some(a.guard) } else { guard_of(a.guard) };
        let Some(guard) = guard else {
            continue;
        };
        let cond = fold(ssa, &subst(&a.cond, &known));
        if cond == SsaExpr::Bool(true) {
            continue;
        }
        assumes.push(SsaAssume {
            guard,
            cond,
            ..a.clone()
        });
    }

    // cone of influence
    let mut live = vec![false; ssa.names.len()];
    live[ssa.entry_guard.0 as usize] = true;
    let mark = |e: &SsaExpr, live: &mut Vec<bool>| e.visit_names(&mut |n| live[n.0 as usize] = true);
    for a in &asserts {
        live[a.guard.0 as usize] = true;
        mark(&a.cond, &mut live);
    }
    for a in &assumes {
        live[a.guard.0 as usize] = true;
        mark(&a.cond, &mut live);
    }
    for d in defs.iter().rev() {
        if live[d.name.0 as usize] {
            mark(&d.expr, &mut live);
        }
    }
    let kept: Vec<SsaDef> = defs
        .into_iter()
        .filter(|d| live[d.name.0 as usize])
        .collect();
    let nondets: Vec<SsaNondet> = ssa
        .nondets
        .iter()
        .filter(|n| live[n.name.0 as usize])
        .cloned()
        .collect();

    let changed = kept.len() != ssa.defs.len()
        || asserts.len() != ssa.asserts.len()
        || assumes.len() != ssa.assumes.len()
        || kept.iter().zip(&ssa.defs).any(|(a, b)| a != b);
    let out = SsaProgram {
        names: ssa.names.clone(),
        defs: kept,
        assumes,
        asserts,
        nondets,
        width: ssa.width,
        unwind_bound: ssa.unwind_bound,
        entry_guard: ssa.entry_guard,
    };
    (out, changed)
}

fn subst(e: &SsaExpr, known: &HashMap<SsaName, Known>) -> SsaExpr {
    match e {
        SsaExpr::Name(n) => match known.get(n) {
            Some(Known::Int(v)) => SsaExpr::Int(*v),
            Some(Known::Bool(b)) => SsaExpr::Bool(*b),
            Some(Known::Alias(m)) => SsaExpr::Name(*m),
            None => e.clone(),
        },
        SsaExpr::Int(_) | SsaExpr::Bool(_) | SsaExpr::Nondet => e.clone(),
        SsaExpr::Unary(op, x) => SsaExpr::Unary(*op, Box::new(subst(x, known))),
        SsaExpr::Binary(op, l, r) => SsaExpr::binary(*op, subst(l, known), subst(r, known)),
        SsaExpr::Select(c, t, f) => {
            SsaExpr::select(subst(c, known), subst(t, known), subst(f, known))
        }
    }
}

/// Bottom-up constant folding and local simplification.
fn fold(ssa: &SsaProgram, e: &SsaExpr) -> SsaExpr {
    let w = ssa.width;
    match e {
        SsaExpr::Int(v) => SsaExpr::Int(w.wrap(*v)),
        SsaExpr::Bool(_) | SsaExpr::Name(_) | SsaExpr::Nondet => e.clone(),
        SsaExpr::Unary(op, x) => match (op, fold(ssa, x)) {
            (UnOp::Not, SsaExpr::Bool(b)) => SsaExpr::Bool(!b),
            (UnOp::Not, SsaExpr::Unary(UnOp::Not, inner)) => *inner,
            (UnOp::Neg, SsaExpr::Int(v)) => SsaExpr::Int(w.wrap(v.wrapping_neg())),
            (op, x) => SsaExpr::Unary(*op, Box::new(x)),
        },
        SsaExpr::Binary(op, l, r) => {
            let l = fold(ssa, l);
            let r = fold(ssa, r);
            match (op, &l, &r) {
                (BinOp::And, SsaExpr::Bool(false), _) | (BinOp::And, _, SsaExpr::Bool(false)) => {
                    SsaExpr::Bool(false)
                }
                (BinOp::And, SsaExpr::Bool(true), x) | (BinOp::And, x, SsaExpr::Bool(true)) => {
                    x.clone()
                }
                (BinOp::Or, SsaExpr::Bool(true), _) | (BinOp::Or, _, SsaExpr::Bool(true)) => {
                    SsaExpr::Bool(true)
                }
                (BinOp::Or, SsaExpr::Bool(false), x) | (BinOp::Or, x, SsaExpr::Bool(false)) => {
                    x.clone()
                }
                (op, SsaExpr::Int(a), SsaExpr::Int(b)) if op.is_comparison() => {
                    SsaExpr::Bool(eval_compare(*op, *a, *b))
                }
                (op, SsaExpr::Int(a), SsaExpr::Int(b)) if op.is_arithmetic() => {
                    SsaExpr::Int(eval_arith(*op, *a, *b, w))
                }
                (BinOp::Eq | BinOp::Le | BinOp::Ge, SsaExpr::Name(a), SsaExpr::Name(b)) if a == b => {
                    SsaExpr::Bool(true)
                }
                (BinOp::Ne | BinOp::Lt | BinOp::Gt, SsaExpr::Name(a), SsaExpr::Name(b)) if a == b => {
                    SsaExpr::Bool(false)
                }
                (BinOp::Add | BinOp::Sub, x, SsaExpr::Int(0)) => x.clone(),
                (BinOp::Add, SsaExpr::Int(0), x) => x.clone(),
                (BinOp::Mul, x, SsaExpr::Int(1)) | (BinOp::Mul, SsaExpr::Int(1), x) => x.clone(),
                (BinOp::Mul, _, SsaExpr::Int(0)) | (BinOp::Mul, SsaExpr::Int(0), _) => SsaExpr::Int(0),
                _ => SsaExpr::binary(*op, l, r),
            }
        }
        SsaExpr::Select(c, t, f) => {
            let c = fold(ssa, c);
            let t = fold(ssa, t);
            let f = fold(ssa, f);
            match c {
                SsaExpr::Bool(true) => t,
                SsaExpr::Bool(false) => f,
                _ if t == f => t,
                _ => SsaExpr::select(c, t, f),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse;
    use crate::transform::{inline_calls, omit_features, to_ssa, unroll};
    use crate::value::Width;

    fn build(src: &str, omit: &[&str], k: u32) -> SsaProgram {
        let p = parse(src).unwrap();
        let v = omit_features(&p, &omit.iter().copied().collect()).unwrap();
        let q = unroll(&inline_calls(&v.program), k).unwrap();
        to_ssa(&q, Width::DEFAULT).unwrap()
    }

    #[test]
    fn constants_fold_away() {
        let s = build("func main() { int x = 2; x = x * 3; assert(x == 6); }", &[], 1);
        let (sliced, changed) = slice(&s);
        assert!(changed);
        assert!(sliced.asserts.is_empty());
        assert!(sliced.is_well_formed());
    }

    #[test]
    fn unrelated_inputs_leave_the_cone() {
        let s = build(
            "func main() { int x; int y; x = havoc(); y = havoc(); y = y + 1; assert(x != 3); }",
            &[],
            1,
        );
        let (sliced, changed) = slice(&s);
        assert!(changed);
        assert_eq!(sliced.nondets.len(), 1);
        assert_eq!(sliced.nondets[0].var, "x");
        assert!(sliced.is_well_formed());
    }

    #[test]
    fn omitted_branch_is_forced_off() {
        let s = build(
            r#"func main() { int a; a = havoc(); if (a == 1) { log("f"); assert(false); } assert(a != 2); }"#,
            &["f"],
            1,
        );
        let (sliced, _) = slice(&s);
        assert_eq!(sliced.asserts.len(), 1);
        assert!(sliced.is_well_formed());
    }

    #[test]
    fn slicing_preserves_verdicts() {
        let s = build(
            "int a[3]; func main() { int i; int j; i = havoc(); j = havoc(); a[i] = j; assert(a[1] != 5); }",
            &[],
            1,
        );
        let (sliced, _) = slice(&s);
        for i in -1..4 {
            for j in [0, 5] {
                let input = |n: SsaName| {
                    s.nondets
                        .iter()
                        .position(|d| d.name == n)
                        .map(|k| if k == 0 { i } else { j })
                };
                let full = s.evaluate(&input);
                let part = sliced.evaluate(&input);
                assert_eq!(s.violated(&full).is_some(), sliced.violated(&part).is_some(), "i={i} j={j}");
            }
        }
    }
}
