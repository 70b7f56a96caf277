//! Guarded static single assignment form.
//!
//! Every definition carries the guard (a Boolean SSA name) under which the
//! statement it came from executes. Execution halts at the first failing
//! check, so the guard after a check is `g && cond` and the selectors of
//! different checks are mutually exclusive.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::frontend::*;
use crate::value::{eval_arith, eval_compare, Width};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SsaName(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsaType {
    Int,
    Bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameInfo {
    pub base: String,
    pub version: u32,
    pub ty: SsaType,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SsaExpr {
    Int(i64),
    Bool(bool),
    Name(SsaName),
    /// Unconstrained input; only appears as the whole right-hand side of a
    /// definition.
    Nondet,
    Unary(UnOp, Box<SsaExpr>),
    Binary(BinOp, Box<SsaExpr>, Box<SsaExpr>),
    /// `cond ? then : else`
    Select(Box<SsaExpr>, Box<SsaExpr>, Box<SsaExpr>),
}

impl SsaExpr {
    pub fn name(n: SsaName) -> SsaExpr {
        SsaExpr::Name(n)
    }

    pub fn binary(op: BinOp, l: SsaExpr, r: SsaExpr) -> SsaExpr {
        SsaExpr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn not(e: SsaExpr) -> SsaExpr {
        match e {
            SsaExpr::Bool(b) => SsaExpr::Bool(!b),
            e => SsaExpr::Unary(UnOp::Not, Box::new(e)),
        }
    }

    pub fn select(c: SsaExpr, t: SsaExpr, e: SsaExpr) -> SsaExpr {
        SsaExpr::Select(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn visit_names(&self, f: &mut impl FnMut(SsaName)) {
        match self {
            SsaExpr::Int(_) | SsaExpr::Bool(_) | SsaExpr::Nondet => {}
            SsaExpr::Name(n) => f(*n),
            SsaExpr::Unary(_, e) => e.visit_names(f),
            SsaExpr::Binary(_, l, r) => {
                l.visit_names(f);
                r.visit_names(f);
            }
            SsaExpr::Select(c, t, e) => {
                c.visit_names(f);
                t.visit_names(f);
                e.visit_names(f);
            }
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, SsaExpr::Int(_) | SsaExpr::Bool(_) | SsaExpr::Name(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsaDef {
    pub name: SsaName,
    pub expr: SsaExpr,
    pub guard: SsaName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsaAssume {
    pub guard: SsaName,
    pub cond: SsaExpr,
    pub source: StmtId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    User,
    Bounds,
    DivByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssertId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsaAssert {
    pub id: AssertId,
    /// Reaching this check with `guard` true and `cond` false is a violation.
    pub guard: SsaName,
    pub cond: SsaExpr,
    /// Original (pre-rewrite) statement of the check.
    pub source: StmtId,
    pub kind: CheckKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsaNondet {
    pub name: SsaName,
    pub guard: SsaName,
    pub source: StmtId,
    pub var: String,
}

#[derive(Debug, Clone)]
pub struct SsaProgram {
    pub names: Vec<NameInfo>,
    /// Definitions in topological order.
    pub defs: Vec<SsaDef>,
    pub assumes: Vec<SsaAssume>,
    pub asserts: Vec<SsaAssert>,
    /// Havoc points in execution order.
    pub nondets: Vec<SsaNondet>,
    pub width: Width,
    pub unwind_bound: u32,
    /// The guard that is always true.
    pub entry_guard: SsaName,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsaError {
    #[error("program still contains a loop")]
    NotLoopFree,
    #[error("program still contains a call")]
    NotInlined,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("array size of `{0}` is not a constant")]
    BadArray(String),
    #[error("program has no entry function")]
    MissingEntry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Binding {
    Scalar(SsaName),
    Array(Vec<SsaName>),
}

struct Builder<'p> {
    prog: &'p Program,
    width: Width,
    names: Vec<NameInfo>,
    versions: HashMap<String, u32>,
    defs: Vec<SsaDef>,
    assumes: Vec<SsaAssume>,
    asserts: Vec<SsaAssert>,
    nondets: Vec<SsaNondet>,
    env: HashMap<String, Binding>,
    guard: SsaName,
    end_conds: Vec<Expr>,
}

/// Converts a loop-free, call-free program into guarded SSA.
pub fn to_ssa(p: &Program, width: Width) -> Result<SsaProgram, SsaError> {
    let main = p.entry_function().ok_or(SsaError::MissingEntry)?;
    let mut b = Builder {
        prog: p,
        width,
        names: Vec::new(),
        versions: HashMap::new(),
        defs: Vec::new(),
        assumes: Vec::new(),
        asserts: Vec::new(),
        nondets: Vec::new(),
        env: HashMap::new(),
        guard: SsaName(0),
        end_conds: p.end_assumes.iter().map(|e| e.cond.clone()).collect(),
    };
    let truth = b.fresh("$g", SsaType::Bool);
    b.defs.push(SsaDef {
        name: truth,
        expr: SsaExpr::Bool(true),
        guard: truth,
    });
    b.guard = truth;

    for g in &p.globals {
        b.declare(g.id, &g.name, g.size.as_ref(), g.init.as_ref())?;
    }
    b.block(&main.body)?;
    for end in &p.end_assumes {
        let cond = b.expr(&end.cond, end.id)?;
        b.assumes.push(SsaAssume {
            guard: b.guard,
            cond,
            source: end.id,
        });
    }

    Ok(SsaProgram {
        names: b.names,
        defs: b.defs,
        assumes: b.assumes,
        asserts: b.asserts,
        nondets: b.nondets,
        width,
        unwind_bound: 0,
        entry_guard: truth,
    })
}

impl Builder<'_> {
    fn fresh(&mut self, base: &str, ty: SsaType) -> SsaName {
        let v = self.versions.entry(base.to_string()).or_insert(0);
        let version = *v;
        *v += 1;
        self.names.push(NameInfo {
            base: base.to_string(),
            version,
            ty,
        });
        SsaName(self.names.len() as u32 - 1)
    }

    fn def(&mut self, base: &str, ty: SsaType, expr: SsaExpr) -> SsaName {
        let name = self.fresh(base, ty);
        self.defs.push(SsaDef {
            name,
            expr,
            guard: self.guard,
        });
        name
    }

    fn atom(&mut self, e: SsaExpr, ty: SsaType) -> SsaExpr {
        if e.is_atom() {
            e
        } else {
            SsaExpr::Name(self.def("$t", ty, e))
        }
    }

    fn and_guard(&mut self, g: SsaName, cond: SsaExpr) -> SsaName {
        match cond {
            SsaExpr::Bool(true) => g,
            cond => {
                let e = SsaExpr::binary(BinOp::And, SsaExpr::Name(g), cond);
                self.def("$g", SsaType::Bool, e)
            }
        }
    }

    fn or_guard(&mut self, a: SsaName, b: SsaName) -> SsaName {
        if a == b {
            return a;
        }
        let e = SsaExpr::binary(BinOp::Or, SsaExpr::Name(a), SsaExpr::Name(b));
        self.def("$g", SsaType::Bool, e)
    }

    fn scalar(&self, name: &str) -> Result<SsaName, SsaError> {
        match self.env.get(name) {
            Some(Binding::Scalar(n)) => Ok(*n),
            _ => Err(SsaError::UnknownVariable(name.to_string())),
        }
    }

    fn array(&self, name: &str) -> Result<Vec<SsaName>, SsaError> {
        match self.env.get(name) {
            Some(Binding::Array(v)) => Ok(v.clone()),
            _ => Err(SsaError::UnknownVariable(name.to_string())),
        }
    }

    fn check(&mut self, kind: CheckKind, cond: SsaExpr, stmt: StmtId) -> Result<(), SsaError> {
        let mut sel_guard = self.guard;
        let ends = std::mem::take(&mut self.end_conds);
        for c in &ends {
            let c = self.expr(c, stmt)?;
            sel_guard = self.and_guard(sel_guard, c);
        }
        self.end_conds = ends;
        self.asserts.push(SsaAssert {
            id: AssertId(self.asserts.len() as u32),
            guard: sel_guard,
            cond: cond.clone(),
            source: self.prog.origin_of(stmt),
            kind,
        });
        self.guard = self.and_guard(self.guard, cond);
        Ok(())
    }

    fn index_check(&mut self, idx: &SsaExpr, len: usize, stmt: StmtId) -> Result<(), SsaError> {
        let nonneg = SsaExpr::binary(BinOp::Ge, idx.clone(), SsaExpr::Int(0));
        let cond = if (len as i128) - 1 >= self.width.max_value() as i128 {
            nonneg
        } else {
            let below = SsaExpr::binary(BinOp::Lt, idx.clone(), SsaExpr::Int(len as i64));
            SsaExpr::binary(BinOp::And, nonneg, below)
        };
        self.check(CheckKind::Bounds, cond, stmt)
    }

    /// Number of array elements addressable by an index at this width.
    fn reachable(&self, len: usize) -> usize {
        let max = self.width.max_value();
        if (len as i128) - 1 > max as i128 {
            (max as usize).saturating_add(1)
        } else {
            len
        }
    }

    fn expr(&mut self, e: &Expr, stmt: StmtId) -> Result<SsaExpr, SsaError> {
        Ok(match e {
            Expr::Int(v) => SsaExpr::Int(self.width.wrap(*v)),
            Expr::Bool(b) => SsaExpr::Bool(*b),
            Expr::Var(v) => SsaExpr::Name(self.scalar(v)?),
            Expr::Index(a, i) => {
                let elems = self.array(a)?;
                let i = self.expr(i, stmt)?;
                let idx = self.atom(i, SsaType::Int);
                self.index_check(&idx, elems.len(), stmt)?;
                let n = self.reachable(elems.len());
                if let SsaExpr::Int(c) = idx {
                    let c = if c >= 0 && (c as usize) < n { c as usize } else { 0 };
                    return Ok(SsaExpr::Name(elems[c]));
                }
                let mut read = SsaExpr::Name(elems[n - 1]);
                for j in (0..n - 1).rev() {
                    let hit = SsaExpr::binary(BinOp::Eq, idx.clone(), SsaExpr::Int(j as i64));
                    read = SsaExpr::select(hit, SsaExpr::Name(elems[j]), read);
                }
                self.atom(read, SsaType::Int)
            }
            Expr::Unary(op, x) => {
                let x = self.expr(x, stmt)?;
                match op {
                    UnOp::Not => SsaExpr::not(x),
                    UnOp::Neg => SsaExpr::Unary(UnOp::Neg, Box::new(x)),
                }
            }
            Expr::Binary(op @ (BinOp::And | BinOp::Or), l, r) => {
                let lv = self.expr(l, stmt)?;
                if !r.has_checks() {
                    let rv = self.expr(r, stmt)?;
                    return Ok(SsaExpr::binary(*op, lv, rv));
                }
                // the right operand only runs when the left does not decide
                let lv = self.atom(lv, SsaType::Bool);
                let before = self.guard;
                let runs = if *op == BinOp::And {
                    lv.clone()
                } else {
                    SsaExpr::not(lv.clone())
                };
                let rhs_guard = self.and_guard(before, runs.clone());
                self.guard = rhs_guard;
                let rv = self.expr(r, stmt)?;
                if self.guard != rhs_guard {
                    let after_rhs = self.guard;
                    self.guard = before;
                    let skipped = self.and_guard(before, SsaExpr::not(runs));
                    self.guard = self.or_guard(skipped, after_rhs);
                } else {
                    self.guard = before;
                }
                SsaExpr::binary(*op, lv, rv)
            }
            Expr::Binary(op, l, r) => {
                let lv = self.expr(l, stmt)?;
                let rv = self.expr(r, stmt)?;
                if matches!(op, BinOp::Div | BinOp::Rem) {
                    let rv = self.atom(rv, SsaType::Int);
                    let nonzero = SsaExpr::binary(BinOp::Ne, rv.clone(), SsaExpr::Int(0));
                    self.check(CheckKind::DivByZero, nonzero, stmt)?;
                    SsaExpr::binary(*op, lv, rv)
                } else {
                    SsaExpr::binary(*op, lv, rv)
                }
            }
        })
    }

    fn declare(
        &mut self,
        id: StmtId,
        name: &str,
        size: Option<&Expr>,
        init: Option<&Expr>,
    ) -> Result<(), SsaError> {
        match size {
            Some(size) => {
                let len = validate::array_size(size)
                    .ok_or_else(|| SsaError::BadArray(name.to_string()))?;
                let elems = (0..len)
                    .map(|j| self.def(&format!("{name}[{j}]"), SsaType::Int, SsaExpr::Int(0)))
                    .collect();
                self.env.insert(name.to_string(), Binding::Array(elems));
            }
            None => {
                let value = match init {
                    Some(e) => self.expr(e, id)?,
                    None => SsaExpr::Int(0),
                };
                let n = self.def(name, SsaType::Int, value);
                self.env.insert(name.to_string(), Binding::Scalar(n));
            }
        }
        Ok(())
    }

    fn block(&mut self, stmts: &[Stmt]) -> Result<(), SsaError> {
        let outer: Vec<String> = self.env.keys().cloned().collect();
        for s in stmts {
            self.stmt(s)?;
        }
        // drop block-local declarations, restoring any shadowed binding
        let mut env = HashMap::with_capacity(outer.len());
        for k in outer {
            let v = self.env.remove(&k).expect("outer binding survives");
            env.insert(k, v);
        }
        self.env = env;
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt) -> Result<(), SsaError> {
        match &s.kind {
            StmtKind::Decl { name, size, init } => {
                self.declare(s.id, name, size.as_ref(), init.as_ref())?;
            }
            StmtKind::Assign { target, value } => match target {
                LValue::Var(x) => {
                    self.scalar(x)?;
                    let v = self.expr(value, s.id)?;
                    let n = self.def(x, SsaType::Int, v);
                    self.env.insert(x.clone(), Binding::Scalar(n));
                }
                LValue::Index(a, i) => {
                    let elems = self.array(a)?;
                    let i = self.expr(i, s.id)?;
                    let idx = self.atom(i, SsaType::Int);
                    let v = self.expr(value, s.id)?;
                    let v = self.atom(v, SsaType::Int);
                    self.index_check(&idx, elems.len(), s.id)?;
                    let n = self.reachable(elems.len());
                    let mut new = elems.clone();
                    for (j, slot) in new.iter_mut().enumerate().take(n) {
                        let base = format!("{a}[{j}]");
                        let e = match &idx {
                            SsaExpr::Int(c) if *c == j as i64 => v.clone(),
                            SsaExpr::Int(_) => continue,
                            _ => SsaExpr::select(
                                SsaExpr::binary(BinOp::Eq, idx.clone(), SsaExpr::Int(j as i64)),
                                v.clone(),
                                SsaExpr::Name(*slot),
                            ),
                        };
                        *slot = self.def(&base, SsaType::Int, e);
                    }
                    self.env.insert(a.clone(), Binding::Array(new));
                }
            },
            StmtKind::Havoc(x) => {
                self.scalar(x)?;
                let n = self.def(x, SsaType::Int, SsaExpr::Nondet);
                self.nondets.push(SsaNondet {
                    name: n,
                    guard: self.guard,
                    source: self.prog.origin_of(s.id),
                    var: x.clone(),
                });
                self.env.insert(x.clone(), Binding::Scalar(n));
            }
            StmtKind::Assert(e) => {
                let c = self.expr(e, s.id)?;
                self.check(CheckKind::User, c, s.id)?;
            }
            StmtKind::Assume(e) => {
                let c = self.expr(e, s.id)?;
                self.assumes.push(SsaAssume {
                    guard: self.guard,
                    cond: c,
                    source: self.prog.origin_of(s.id),
                });
            }
            StmtKind::Log(_) => {}
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.expr(cond, s.id)?;
                let c = self.atom(c, SsaType::Bool);
                let pre = self.guard;
                let env_pre = self.env.clone();

                let g_then = self.and_guard(pre, c.clone());
                self.guard = g_then;
                self.block(then_branch)?;
                let then_end = self.guard;
                let env_then = std::mem::replace(&mut self.env, env_pre.clone());

                self.guard = pre;
                let g_else = self.and_guard(pre, SsaExpr::not(c.clone()));
                self.guard = g_else;
                self.block(else_branch)?;
                let else_end = self.guard;
                let env_else = std::mem::take(&mut self.env);

                self.guard = pre;
                let mut merged = HashMap::with_capacity(env_pre.len());
                let mut keys: Vec<&String> = env_pre.keys().collect();
                keys.sort();
                for k in keys {
                    let t = &env_then[k];
                    let e = &env_else[k];
                    let b = match (t, e) {
                        (Binding::Scalar(a), Binding::Scalar(b)) if a != b => {
                            Binding::Scalar(self.merge(k, SsaType::Int, g_then, *a, *b))
                        }
                        (Binding::Array(a), Binding::Array(b)) if a != b => Binding::Array(
                            a.iter()
                                .zip(b)
                                .enumerate()
                                .map(|(j, (x, y))| {
                                    if x == y {
                                        *x
                                    } else {
                                        self.merge(&format!("{k}[{j}]"), SsaType::Int, g_then, *x, *y)
                                    }
                                })
                                .collect(),
                        ),
                        _ => t.clone(),
                    };
                    merged.insert(k.clone(), b);
                }
                self.env = merged;
                self.guard = if then_end == g_then && else_end == g_else {
                    pre
                } else {
                    self.or_guard(then_end, else_end)
                };
            }
            StmtKind::While { .. } | StmtKind::For { .. } => return Err(SsaError::NotLoopFree),
            StmtKind::Call { .. } | StmtKind::Return(_) => return Err(SsaError::NotInlined),
        }
        Ok(())
    }

    fn merge(&mut self, base: &str, ty: SsaType, cond: SsaName, a: SsaName, b: SsaName) -> SsaName {
        let e = SsaExpr::select(SsaExpr::Name(cond), SsaExpr::Name(a), SsaExpr::Name(b));
        self.def(base, ty, e)
    }
}

impl SsaProgram {
    pub fn info(&self, n: SsaName) -> &NameInfo {
        &self.names[n.0 as usize]
    }

    pub fn display_name(&self, n: SsaName) -> String {
        let i = self.info(n);
        format!("{}#{}", i.base, i.version)
    }

    /// Evaluates every definition, taking nondeterministic values from
    /// `input` (missing inputs read as 0). Booleans evaluate to 0 or 1.
    pub fn evaluate(&self, input: &impl Fn(SsaName) -> Option<i64>) -> Vec<i64> {
        let mut vals = vec![0i64; self.names.len()];
        for d in &self.defs {
            vals[d.name.0 as usize] = match d.expr {
                SsaExpr::Nondet => self.width.wrap(input(d.name).unwrap_or(0)),
                ref e => self.eval(e, &vals),
            };
        }
        vals
    }

    pub fn eval(&self, e: &SsaExpr, vals: &[i64]) -> i64 {
        let w = self.width;
        match e {
            SsaExpr::Int(v) => w.wrap(*v),
            SsaExpr::Bool(b) => *b as i64,
            SsaExpr::Name(n) => vals[n.0 as usize],
            SsaExpr::Nondet => 0,
            SsaExpr::Unary(UnOp::Not, x) => (self.eval(x, vals) == 0) as i64,
            SsaExpr::Unary(UnOp::Neg, x) => w.wrap(self.eval(x, vals).wrapping_neg()),
            SsaExpr::Binary(op, l, r) => {
                let a = self.eval(l, vals);
                let b = self.eval(r, vals);
                match op {
                    BinOp::And => (a != 0 && b != 0) as i64,
                    BinOp::Or => (a != 0 || b != 0) as i64,
                    op if op.is_comparison() => eval_compare(*op, a, b) as i64,
                    op => eval_arith(*op, a, b, w),
                }
            }
            SsaExpr::Select(c, t, f) => {
                if self.eval(c, vals) != 0 {
                    self.eval(t, vals)
                } else {
                    self.eval(f, vals)
                }
            }
        }
    }

    /// Index of the first check whose guard holds and whose condition fails.
    pub fn violated(&self, vals: &[i64]) -> Option<usize> {
        self.asserts
            .iter()
            .position(|a| vals[a.guard.0 as usize] != 0 && self.eval(&a.cond, vals) == 0)
    }

    /// True when every assumption holds under `vals`.
    pub fn assumptions_hold(&self, vals: &[i64]) -> bool {
        self.assumes
            .iter()
            .all(|a| vals[a.guard.0 as usize] == 0 || self.eval(&a.cond, vals) != 0)
    }

    /// Checks single assignment and define-before-use.
    pub fn is_well_formed(&self) -> bool {
        let mut defined = vec![false; self.names.len()];
        let mut ok = true;
        for d in &self.defs {
            d.expr.visit_names(&mut |n| ok &= defined[n.0 as usize]);
            ok &= d.guard == d.name || defined[d.guard.0 as usize];
            ok &= !defined[d.name.0 as usize];
            defined[d.name.0 as usize] = true;
        }
        for a in &self.asserts {
            a.cond.visit_names(&mut |n| ok &= defined[n.0 as usize]);
            ok &= defined[a.guard.0 as usize];
        }
        for a in &self.assumes {
            a.cond.visit_names(&mut |n| ok &= defined[n.0 as usize]);
            ok &= defined[a.guard.0 as usize];
        }
        ok
    }

    fn fmt_expr(&self, e: &SsaExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match e {
            SsaExpr::Int(v) => write!(f, "{v}"),
            SsaExpr::Bool(b) => write!(f, "{b}"),
            SsaExpr::Name(n) => write!(f, "{}", self.display_name(*n)),
            SsaExpr::Nondet => write!(f, "nondet()"),
            SsaExpr::Unary(op, x) => {
                write!(f, "{}", if *op == UnOp::Not { "!" } else { "-" })?;
                if x.is_atom() {
                    self.fmt_expr(x, f)
                } else {
                    write!(f, "(")?;
                    self.fmt_expr(x, f)?;
                    write!(f, ")")
                }
            }
            SsaExpr::Binary(op, l, r) => {
                write!(f, "(")?;
                self.fmt_expr(l, f)?;
                write!(f, " {} ", op.symbol())?;
                self.fmt_expr(r, f)?;
                write!(f, ")")
            }
            SsaExpr::Select(c, t, e) => {
                write!(f, "(")?;
                self.fmt_expr(c, f)?;
                write!(f, " ? ")?;
                self.fmt_expr(t, f)?;
                write!(f, " : ")?;
                self.fmt_expr(e, f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for SsaProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.defs {
            write!(f, "{} := ", self.display_name(d.name))?;
            self.fmt_expr(&d.expr, f)?;
            writeln!(f, " [{}]", self.display_name(d.guard))?;
        }
        for a in &self.assumes {
            write!(f, "ASSUME {} -> ", self.display_name(a.guard))?;
            self.fmt_expr(&a.cond, f)?;
            writeln!(f)?;
        }
        for a in &self.asserts {
            write!(f, "ASSERT {} {} -> ", a.id.0, self.display_name(a.guard))?;
            self.fmt_expr(&a.cond, f)?;
            writeln!(f)?;
        }
        Ok(())
    }
}
