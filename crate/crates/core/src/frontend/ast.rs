use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Identifier of a statement, unique within a [`Program`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StmtId(pub u32);

impl fmt::Display for StmtId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceLoc {
    pub file: Arc<str>,
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for SourceLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 6,
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem
        )
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne
        )
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }

    pub const ALL: [BinOp; 13] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Rem,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::And,
        BinOp::Or,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(String),
    Index(String, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Unary(UnOp::Not, Box::new(e))
    }

    /// True if evaluating this expression can trip an instrumented check
    /// (array bounds or division by zero).
    pub fn has_checks(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => false,
            Expr::Index(..) => true,
            Expr::Unary(_, e) => e.has_checks(),
            Expr::Binary(op, l, r) => {
                matches!(op, BinOp::Div | BinOp::Rem) || l.has_checks() || r.has_checks()
            }
        }
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Expr::Int(_) | Expr::Bool(_) => {}
            Expr::Var(v) => f(v),
            Expr::Index(a, i) => {
                f(a);
                i.visit_vars(f);
            }
            Expr::Unary(_, e) => e.visit_vars(f),
            Expr::Binary(_, l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }

    pub fn rename(&self, map: &impl Fn(&str) -> String) -> Expr {
        match self {
            Expr::Int(v) => Expr::Int(*v),
            Expr::Bool(b) => Expr::Bool(*b),
            Expr::Var(v) => Expr::Var(map(v)),
            Expr::Index(a, i) => Expr::Index(map(a), Box::new(i.rename(map))),
            Expr::Unary(op, e) => Expr::Unary(*op, Box::new(e.rename(map))),
            Expr::Binary(op, l, r) => {
                Expr::Binary(*op, Box::new(l.rename(map)), Box::new(r.rename(map)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LValue {
    Var(String),
    Index(String, Expr),
}

impl LValue {
    pub fn name(&self) -> &str {
        match self {
            LValue::Var(n) | LValue::Index(n, _) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stmt {
    pub id: StmtId,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StmtKind {
    /// `int x;`, `int x = e;` or `int a[N];`
    Decl {
        name: String,
        size: Option<Expr>,
        init: Option<Expr>,
    },
    Assign {
        target: LValue,
        value: Expr,
    },
    If {
        cond: Expr,
        then_branch: Vec<Stmt>,
        else_branch: Vec<Stmt>,
    },
    While {
        cond: Expr,
        body: Vec<Stmt>,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Expr,
        step: Option<Box<Stmt>>,
        body: Vec<Stmt>,
    },
    /// `f(args);` or `x = f(args);`
    Call {
        dest: Option<String>,
        func: String,
        args: Vec<Expr>,
    },
    Return(Option<Expr>),
    Assert(Expr),
    Assume(Expr),
    Log(String),
    /// `x = havoc();`
    Havoc(String),
}

impl Stmt {
    /// Visits this statement and every nested statement in pre-order.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Stmt)) {
        f(self);
        match &self.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                then_branch.iter().for_each(|s| s.walk(f));
                else_branch.iter().for_each(|s| s.walk(f));
            }
            StmtKind::While { body, .. } => body.iter().for_each(|s| s.walk(f)),
            StmtKind::For {
                init, step, body, ..
            } => {
                if let Some(init) = init {
                    init.walk(f);
                }
                body.iter().for_each(|s| s.walk(f));
                if let Some(step) = step {
                    step.walk(f);
                }
            }
            _ => {}
        }
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut Stmt)) {
        f(self);
        match &mut self.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                then_branch.iter_mut().for_each(|s| s.walk_mut(f));
                else_branch.iter_mut().for_each(|s| s.walk_mut(f));
            }
            StmtKind::While { body, .. } => body.iter_mut().for_each(|s| s.walk_mut(f)),
            StmtKind::For {
                init, step, body, ..
            } => {
                if let Some(init) = init {
                    init.walk_mut(f);
                }
                body.iter_mut().for_each(|s| s.walk_mut(f));
                if let Some(step) = step {
                    step.walk_mut(f);
                }
            }
            _ => {}
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.kind, StmtKind::While { .. } | StmtKind::For { .. })
    }
}

pub fn walk_block<'a>(block: &'a [Stmt], f: &mut impl FnMut(&'a Stmt)) {
    for s in block {
        s.walk(f);
    }
}

/// A global variable declaration. Globals are zero-initialized unless an
/// initializer is given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub id: StmtId,
    pub name: String,
    pub size: Option<Expr>,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionDef {
    pub id: StmtId,
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Stmt>,
}

impl FunctionDef {
    pub fn returns_value(&self) -> bool {
        let mut found = false;
        walk_block(&self.body, &mut |s| {
            if matches!(s.kind, StmtKind::Return(Some(_))) {
                found = true;
            }
        });
        found
    }
}

/// A condition that must hold whenever a trace ends, whether by reaching
/// the end of the entry function or by violating an assertion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndAssume {
    pub id: StmtId,
    pub cond: Expr,
}

#[derive(Debug, Clone)]
pub struct Program {
    pub globals: Vec<VarDecl>,
    pub functions: Vec<FunctionDef>,
    pub end_assumes: Vec<EndAssume>,
    pub entry: String,
    pub source_map: BTreeMap<StmtId, SourceLoc>,
    /// Statements created by rewriting (inlining, unrolling) point back at the
    /// statement they were copied from.
    pub origins: BTreeMap<StmtId, StmtId>,
    pub next_id: u32,
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn entry_function(&self) -> Option<&FunctionDef> {
        self.function(&self.entry)
    }

    pub fn entry_function_mut(&mut self) -> Option<&mut FunctionDef> {
        let entry = self.entry.clone();
        self.functions.iter_mut().find(|f| f.name == entry)
    }

    pub fn global(&self, name: &str) -> Option<&VarDecl> {
        self.globals.iter().find(|g| g.name == name)
    }

    /// The original statement a (possibly copied) statement stems from.
    pub fn origin_of(&self, id: StmtId) -> StmtId {
        let mut cur = id;
        while let Some(&next) = self.origins.get(&cur) {
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }

    pub fn loc(&self, id: StmtId) -> Option<&SourceLoc> {
        self.source_map
            .get(&id)
            .or_else(|| self.source_map.get(&self.origin_of(id)))
    }

    /// Allocates a fresh statement id that copies `from`'s location and
    /// records `from` as its origin.
    pub fn fresh_id_from(&mut self, from: StmtId) -> StmtId {
        let id = StmtId(self.next_id);
        self.next_id += 1;
        if let Some(loc) = self.loc(from).cloned() {
            self.source_map.insert(id, loc);
        }
        let root = self.origin_of(from);
        self.origins.insert(id, root);
        id
    }

    /// Allocates a fresh statement id with its own location.
    pub fn fresh_id_at(&mut self, loc: SourceLoc) -> StmtId {
        let id = StmtId(self.next_id);
        self.next_id += 1;
        self.source_map.insert(id, loc);
        id
    }

    /// Structural equality ignoring statement ids, locations and rewrite
    /// bookkeeping.
    pub fn same_structure(&self, other: &Program) -> bool {
        self.entry == other.entry
            && super::print_program(self) == super::print_program(other)
    }

    pub fn all_statements(&self) -> Vec<&Stmt> {
        let mut out = Vec::new();
        for f in &self.functions {
            walk_block(&f.body, &mut |s| out.push(s));
        }
        out
    }

    pub fn log_labels(&self) -> Vec<&str> {
        self.all_statements()
            .into_iter()
            .filter_map(|s| match &s.kind {
                StmtKind::Log(l) => Some(l.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn file_name(&self) -> Arc<str> {
        self.source_map
            .values()
            .next()
            .map(|l| l.file.clone())
            .unwrap_or_else(|| Arc::from("<input>"))
    }
}
