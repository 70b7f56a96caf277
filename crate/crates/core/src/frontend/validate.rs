use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::ast::*;

/// Largest array the checker accepts.
pub const MAX_ARRAY_SIZE: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticErrorKind {
    #[error("no entry function `main`")]
    MissingEntry,
    #[error("entry function must take no parameters")]
    EntryHasParams,
    #[error("entry function may not contain `return`")]
    ReturnInEntry,
    #[error("function `{0}` defined more than once")]
    DuplicateFunction(String),
    #[error("`{0}` is already declared in an enclosing scope")]
    Redeclaration(String),
    #[error("use of undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("call to undefined function `{0}`")]
    UndeclaredFunction(String),
    #[error("`{func}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        func: String,
        expected: usize,
        found: usize,
    },
    #[error("function `{0}` is recursive")]
    RecursionError(String),
    #[error("array size must be a compile-time constant")]
    NonConstArraySize,
    #[error("array size must be between 1 and {MAX_ARRAY_SIZE}")]
    BadArraySize,
    #[error("global initializer must be a compile-time constant")]
    NonConstInitializer,
    #[error("expected {expected} expression, found {found}")]
    TypeMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("`{0}` is an array and must be indexed")]
    ArrayUsedAsScalar(String),
    #[error("`{0}` is not an array")]
    NotAnArray(String),
    #[error("log label must be non-empty")]
    EmptyLogLabel,
    #[error("`{0}` does not return a value")]
    NoReturnValue(String),
    #[error("function `{0}` mixes `return;` and `return e;`")]
    InconsistentReturn(String),
    #[error("`havoc` is reserved")]
    ReservedName,
    #[error("end assumption may only mention global scalars")]
    NonGlobalInEndAssume,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}")]
pub struct SemanticError {
    /// Offending statement; `None` only for program-level problems.
    pub stmt: Option<StmtId>,
    pub kind: SemanticErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Int,
    Bool,
}

impl Type {
    fn name(self) -> &'static str {
        match self {
            Type::Int => "int",
            Type::Bool => "bool",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Scalar,
    Array,
}

/// Evaluates an expression built only from literals and arithmetic.
pub fn const_eval(e: &Expr) -> Option<i64> {
    match e {
        Expr::Int(v) => Some(*v),
        Expr::Unary(UnOp::Neg, inner) => const_eval(inner)?.checked_neg(),
        Expr::Binary(op, l, r) => {
            let (l, r) = (const_eval(l)?, const_eval(r)?);
            match op {
                BinOp::Add => l.checked_add(r),
                BinOp::Sub => l.checked_sub(r),
                BinOp::Mul => l.checked_mul(r),
                BinOp::Div => l.checked_div(r),
                BinOp::Rem => l.checked_rem(r),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Constant array size, if the declaration is well formed.
pub fn array_size(size: &Expr) -> Option<usize> {
    const_eval(size)
        .filter(|n| (1..=MAX_ARRAY_SIZE).contains(n))
        .map(|n| n as usize)
}

struct Checker<'p> {
    program: &'p Program,
    globals: HashMap<&'p str, VarKind>,
    errors: Vec<SemanticError>,
}

struct Scope<'a> {
    frames: Vec<HashMap<&'a str, VarKind>>,
}

impl<'a> Scope<'a> {
    fn lookup(&self, name: &str) -> Option<VarKind> {
        self.frames.iter().rev().find_map(|f| f.get(name).copied())
    }
}

impl<'p> Checker<'p> {
    fn err(&mut self, stmt: StmtId, kind: SemanticErrorKind) {
        self.errors.push(SemanticError {
            stmt: Some(stmt),
            kind,
        });
    }

    fn var_kind(&self, scope: &Scope<'_>, name: &str) -> Option<VarKind> {
        scope
            .lookup(name)
            .or_else(|| self.globals.get(name).copied())
    }

    fn expr_type(&mut self, e: &Expr, scope: &Scope<'_>, at: StmtId) -> Option<Type> {
        match e {
            Expr::Int(_) => Some(Type::Int),
            Expr::Bool(_) => Some(Type::Bool),
            Expr::Var(v) => match self.var_kind(scope, v) {
                None => {
                    self.err(at, SemanticErrorKind::UndeclaredVariable(v.clone()));
                    None
                }
                Some(VarKind::Array) => {
                    self.err(at, SemanticErrorKind::ArrayUsedAsScalar(v.clone()));
                    None
                }
                Some(VarKind::Scalar) => Some(Type::Int),
            },
            Expr::Index(a, i) => {
                match self.var_kind(scope, a) {
                    None => self.err(at, SemanticErrorKind::UndeclaredVariable(a.clone())),
                    Some(VarKind::Scalar) => self.err(at, SemanticErrorKind::NotAnArray(a.clone())),
                    Some(VarKind::Array) => {}
                }
                self.expect_type(i, Type::Int, scope, at);
                Some(Type::Int)
            }
            Expr::Unary(UnOp::Neg, inner) => {
                self.expect_type(inner, Type::Int, scope, at);
                Some(Type::Int)
            }
            Expr::Unary(UnOp::Not, inner) => {
                self.expect_type(inner, Type::Bool, scope, at);
                Some(Type::Bool)
            }
            Expr::Binary(op, l, r) => {
                if op.is_logical() {
                    self.expect_type(l, Type::Bool, scope, at);
                    self.expect_type(r, Type::Bool, scope, at);
                    Some(Type::Bool)
                } else {
                    self.expect_type(l, Type::Int, scope, at);
                    self.expect_type(r, Type::Int, scope, at);
                    Some(if op.is_comparison() {
                        Type::Bool
                    } else {
                        Type::Int
                    })
                }
            }
        }
    }

    fn expect_type(&mut self, e: &Expr, want: Type, scope: &Scope<'_>, at: StmtId) {
        if let Some(found) = self.expr_type(e, scope, at) {
            if found != want {
                self.err(
                    at,
                    SemanticErrorKind::TypeMismatch {
                        expected: want.name(),
                        found: found.name(),
                    },
                );
            }
        }
    }

    fn declare(&mut self, scope: &mut Scope<'p>, name: &'p str, kind: VarKind, at: StmtId) {
        if name == "havoc" {
            self.err(at, SemanticErrorKind::ReservedName);
        }
        if scope.lookup(name).is_some() || self.globals.contains_key(name) {
            self.err(at, SemanticErrorKind::Redeclaration(name.to_string()));
        }
        scope
            .frames
            .last_mut()
            .expect("scope has a frame")
            .insert(name, kind);
    }

    fn check_array_size(&mut self, size: &Expr, at: StmtId) {
        match const_eval(size) {
            None => self.err(at, SemanticErrorKind::NonConstArraySize),
            Some(n) if !(1..=MAX_ARRAY_SIZE).contains(&n) => {
                self.err(at, SemanticErrorKind::BadArraySize)
            }
            Some(_) => {}
        }
    }

    fn block(&mut self, block: &'p [Stmt], scope: &mut Scope<'p>, func: &FunctionDef) {
        scope.frames.push(HashMap::new());
        for s in block {
            self.stmt(s, scope, func);
        }
        scope.frames.pop();
    }

    fn stmt(&mut self, s: &'p Stmt, scope: &mut Scope<'p>, func: &FunctionDef) {
        let at = s.id;
        match &s.kind {
            StmtKind::Decl { name, size, init } => {
                if let Some(size) = size {
                    self.check_array_size(size, at);
                    self.declare(scope, name, VarKind::Array, at);
                } else {
                    if let Some(init) = init {
                        self.expect_type(init, Type::Int, scope, at);
                    }
                    self.declare(scope, name, VarKind::Scalar, at);
                }
            }
            StmtKind::Assign { target, value } => {
                match target {
                    LValue::Var(n) => match self.var_kind(scope, n) {
                        None => self.err(at, SemanticErrorKind::UndeclaredVariable(n.clone())),
                        Some(VarKind::Array) => {
                            self.err(at, SemanticErrorKind::ArrayUsedAsScalar(n.clone()))
                        }
                        Some(VarKind::Scalar) => {}
                    },
                    LValue::Index(n, i) => {
                        match self.var_kind(scope, n) {
                            None => {
                                self.err(at, SemanticErrorKind::UndeclaredVariable(n.clone()))
                            }
                            Some(VarKind::Scalar) => {
                                self.err(at, SemanticErrorKind::NotAnArray(n.clone()))
                            }
                            Some(VarKind::Array) => {}
                        }
                        self.expect_type(i, Type::Int, scope, at);
                    }
                }
                self.expect_type(value, Type::Int, scope, at);
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.expect_type(cond, Type::Bool, scope, at);
                self.block(then_branch, scope, func);
                self.block(else_branch, scope, func);
            }
            StmtKind::While { cond, body } => {
                self.expect_type(cond, Type::Bool, scope, at);
                self.block(body, scope, func);
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                scope.frames.push(HashMap::new());
                if let Some(init) = init {
                    self.stmt(init, scope, func);
                }
                self.expect_type(cond, Type::Bool, scope, at);
                self.block(body, scope, func);
                if let Some(step) = step {
                    self.stmt(step, scope, func);
                }
                scope.frames.pop();
            }
            StmtKind::Call { dest, func: callee, args } => {
                for a in args {
                    self.expect_type(a, Type::Int, scope, at);
                }
                if let Some(d) = dest {
                    match self.var_kind(scope, d) {
                        None => self.err(at, SemanticErrorKind::UndeclaredVariable(d.clone())),
                        Some(VarKind::Array) => {
                            self.err(at, SemanticErrorKind::ArrayUsedAsScalar(d.clone()))
                        }
                        Some(VarKind::Scalar) => {}
                    }
                }
                match self.program.function(callee) {
                    None => self.err(at, SemanticErrorKind::UndeclaredFunction(callee.clone())),
                    Some(f) => {
                        if f.params.len() != args.len() {
                            self.err(
                                at,
                                SemanticErrorKind::ArityMismatch {
                                    func: callee.clone(),
                                    expected: f.params.len(),
                                    found: args.len(),
                                },
                            );
                        }
                        if dest.is_some() && !f.returns_value() {
                            self.err(at, SemanticErrorKind::NoReturnValue(callee.clone()));
                        }
                    }
                }
            }
            StmtKind::Return(value) => {
                if func.name == self.program.entry {
                    self.err(at, SemanticErrorKind::ReturnInEntry);
                }
                if let Some(v) = value {
                    self.expect_type(v, Type::Int, scope, at);
                }
            }
            StmtKind::Assert(e) | StmtKind::Assume(e) => {
                self.expect_type(e, Type::Bool, scope, at);
            }
            StmtKind::Log(label) => {
                if label.is_empty() {
                    self.err(at, SemanticErrorKind::EmptyLogLabel);
                }
            }
            StmtKind::Havoc(n) => match self.var_kind(scope, n) {
                None => self.err(at, SemanticErrorKind::UndeclaredVariable(n.clone())),
                Some(VarKind::Array) => {
                    self.err(at, SemanticErrorKind::ArrayUsedAsScalar(n.clone()))
                }
                Some(VarKind::Scalar) => {}
            },
        }
    }
}

/// Functions that lie on a cycle of the call graph, in definition order.
fn recursive_functions(p: &Program) -> Vec<&FunctionDef> {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for f in &p.functions {
        let callees = edges.entry(f.name.as_str()).or_default();
        walk_block(&f.body, &mut |s| {
            if let StmtKind::Call { func, .. } = &s.kind {
                callees.insert(func.as_str());
            }
        });
    }
    let reaches_self = |start: &str| -> bool {
        let mut stack: Vec<&str> = edges
            .get(start)
            .map(|c| c.iter().copied().collect())
            .unwrap_or_default();
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if n == start {
                return true;
            }
            if seen.insert(n) {
                if let Some(next) = edges.get(n) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        false
    };
    p.functions
        .iter()
        .filter(|f| reaches_self(&f.name))
        .collect()
}

/// Checks a parsed program. An empty result means the program is well formed.
pub fn validate(p: &Program) -> Vec<SemanticError> {
    let mut c = Checker {
        program: p,
        globals: HashMap::new(),
        errors: Vec::new(),
    };

    for g in &p.globals {
        if g.name == "havoc" {
            c.err(g.id, SemanticErrorKind::ReservedName);
        }
        if c.globals.contains_key(g.name.as_str()) {
            c.err(g.id, SemanticErrorKind::Redeclaration(g.name.clone()));
        }
        if let Some(size) = &g.size {
            c.check_array_size(size, g.id);
            c.globals.insert(&g.name, VarKind::Array);
        } else {
            if let Some(init) = &g.init {
                if const_eval(init).is_none() {
                    c.err(g.id, SemanticErrorKind::NonConstInitializer);
                }
            }
            c.globals.insert(&g.name, VarKind::Scalar);
        }
    }

    let mut seen = BTreeSet::new();
    for f in &p.functions {
        if !seen.insert(f.name.as_str()) {
            c.err(f.id, SemanticErrorKind::DuplicateFunction(f.name.clone()));
        }
        if f.name == "havoc" {
            c.err(f.id, SemanticErrorKind::ReservedName);
        }
    }

    match p.entry_function() {
        None => c.errors.push(SemanticError {
            stmt: None,
            kind: SemanticErrorKind::MissingEntry,
        }),
        Some(main) if !main.params.is_empty() => c.err(main.id, SemanticErrorKind::EntryHasParams),
        Some(_) => {}
    }

    for f in &p.functions {
        let mut has_value = false;
        let mut has_bare = false;
        walk_block(&f.body, &mut |s| match s.kind {
            StmtKind::Return(Some(_)) => has_value = true,
            StmtKind::Return(None) => has_bare = true,
            _ => {}
        });
        if has_value && has_bare {
            c.err(f.id, SemanticErrorKind::InconsistentReturn(f.name.clone()));
        }

        let mut scope = Scope {
            frames: vec![HashMap::new()],
        };
        for param in &f.params {
            c.declare(&mut scope, param, VarKind::Scalar, f.id);
        }
        c.block(&f.body, &mut scope, f);
    }

    for f in recursive_functions(p) {
        c.err(f.id, SemanticErrorKind::RecursionError(f.name.clone()));
    }

    for ea in &p.end_assumes {
        let empty = Scope { frames: vec![] };
        c.expect_type(&ea.cond, Type::Bool, &empty, ea.id);
        if ea.cond.has_checks() {
            c.err(ea.id, SemanticErrorKind::NonGlobalInEndAssume);
        }
    }

    c.errors
}
