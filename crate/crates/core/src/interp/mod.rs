//! Concrete interpreter for `.imp` programs.
//!
//! Nondeterministic choices (`x = havoc();`) read successive values from a
//! [`NondetTape`]. The interpreter is the ground truth the symbolic pipeline
//! is checked against: counterexamples are replayed here, and
//! [`enumerate`] drives it exhaustively as a brute-force oracle.

mod enumerate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bmc::Counterexample;
use crate::frontend::validate::array_size;
use crate::frontend::*;
use crate::value::{eval_arith, eval_compare, Width};

pub use enumerate::{enumerate, explore, max_havocs, tape_space, EnumerateError, HavocDomain, OracleVerdict};

pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// Values consumed, in order, by the havoc statements an execution reaches.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NondetTape {
    pub values: Vec<i64>,
    pub width: Width,
}

impl NondetTape {
    pub fn new(values: impl IntoIterator<Item = i64>, width: Width) -> NondetTape {
        NondetTape {
            values: values.into_iter().map(|v| width.wrap(v)).collect(),
            width,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeKind {
    Completed,
    AssertionViolation { stmt: StmtId, step: u64 },
    AssumeBlocked(StmtId),
    /// The havoc at `stmt` (assigning `var`) found the tape empty.
    TapeExhausted { stmt: StmtId, var: String },
    StepLimit,
}

/// A variable's value in a trace snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceValue {
    Int(i64),
    Array(Vec<i64>),
}

/// Program state right after executing one statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub stmt: StmtId,
    pub vars: BTreeMap<String, TraceValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionOutcome {
    pub kind: OutcomeKind,
    pub log: Vec<String>,
    pub steps: u64,
    /// Number of tape values read.
    pub consumed: usize,
    /// Empty unless trace recording was requested.
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, Copy)]
pub struct ExecConfig {
    pub width: Width,
    pub step_limit: u64,
    /// When set, a loop attempting more than this many iterations per entry
    /// is blocked, mirroring the unwinding assumption of bounded unrolling.
    pub loop_bound: Option<u32>,
    pub record_trace: bool,
}

impl ExecConfig {
    pub fn new(width: Width) -> ExecConfig {
        ExecConfig {
            width,
            step_limit: DEFAULT_STEP_LIMIT,
            loop_bound: None,
            record_trace: false,
        }
    }
}

/// Runs `p` on `tape`. Every abnormal end is reported as an outcome kind.
pub fn execute(p: &Program, tape: &NondetTape, step_limit: u64, width: Width) -> ExecutionOutcome {
    execute_with(
        p,
        &tape.values,
        &ExecConfig {
            step_limit,
            ..ExecConfig::new(width)
        },
    )
}

pub fn execute_with(p: &Program, tape: &[i64], cfg: &ExecConfig) -> ExecutionOutcome {
    let mut m = Machine {
        program: p,
        cfg,
        tape,
        consumed: 0,
        steps: 0,
        log: Vec::new(),
        trace: Vec::new(),
        globals: BTreeMap::new(),
        frames: Vec::new(),
    };
    let kind = m.run();
    ExecutionOutcome {
        kind,
        log: m.log,
        steps: m.steps,
        consumed: m.consumed,
        trace: m.trace,
    }
}

/// True iff running `p` on the counterexample's tape violates the recorded
/// assertion and reads exactly the whole tape.
pub fn replay(p: &Program, cex: &Counterexample) -> bool {
    replay_matching(p, &cex.tape, |p, stmt| p.origin_of(stmt) == cex.violated_assert)
}

/// Replays `tape` on `p` and tests the violated statement with `accept`.
pub fn replay_matching(
    p: &Program,
    tape: &NondetTape,
    accept: impl Fn(&Program, StmtId) -> bool,
) -> bool {
    let out = execute(p, tape, DEFAULT_STEP_LIMIT, tape.width);
    match out.kind {
        OutcomeKind::AssertionViolation { stmt, .. } => {
            accept(p, stmt) && out.consumed == tape.len()
        }
        _ => false,
    }
}

#[derive(Debug, Clone)]
enum Slot {
    Scalar(i64),
    Array(Vec<i64>),
}

#[derive(Debug, Clone, Copy)]
enum Val {
    Int(i64),
    Bool(bool),
}

impl Val {
    fn int(self) -> i64 {
        match self {
            Val::Int(v) => v,
            Val::Bool(b) => b as i64,
        }
    }

    fn bool(self) -> bool {
        match self {
            Val::Bool(b) => b,
            Val::Int(v) => v != 0,
        }
    }
}

enum Flow {
    Next,
    Return(Option<i64>),
}

type Exec<T> = Result<T, OutcomeKind>;

struct Frame {
    scopes: Vec<BTreeMap<String, Slot>>,
}

struct Machine<'a> {
    program: &'a Program,
    cfg: &'a ExecConfig,
    tape: &'a [i64],
    consumed: usize,
    steps: u64,
    log: Vec<String>,
    trace: Vec<TraceEntry>,
    globals: BTreeMap<String, Slot>,
    frames: Vec<Frame>,
}

impl<'a> Machine<'a> {
    fn run(&mut self) -> OutcomeKind {
        let w = self.cfg.width;
        for g in &self.program.globals {
            let slot = match (&g.size, &g.init) {
                (Some(size), _) => Slot::Array(vec![0; array_size(size).unwrap_or(0)]),
                (None, Some(init)) => {
                    Slot::Scalar(w.wrap(validate::const_eval(init).unwrap_or(0)))
                }
                (None, None) => Slot::Scalar(0),
            };
            self.globals.insert(g.name.clone(), slot);
        }
        let Some(main) = self.program.entry_function() else {
            return OutcomeKind::Completed;
        };
        self.frames.push(Frame {
            scopes: vec![BTreeMap::new()],
        });
        match self.block(&main.body) {
            Err(stop) => stop,
            Ok(_) => match self.failed_end_assume() {
                Some(id) => OutcomeKind::AssumeBlocked(id),
                None => OutcomeKind::Completed,
            },
        }
    }

    fn failed_end_assume(&mut self) -> Option<StmtId> {
        let program = self.program;
        for ea in &program.end_assumes {
            // end assumptions mention only global scalars
            match self.eval(&ea.cond, ea.id) {
                Ok(v) if v.bool() => {}
                _ => return Some(ea.id),
            }
        }
        None
    }

    fn tick(&mut self) -> Exec<()> {
        self.steps += 1;
        if self.steps > self.cfg.step_limit {
            Err(OutcomeKind::StepLimit)
        } else {
            Ok(())
        }
    }

    fn violation(&mut self, stmt: StmtId) -> OutcomeKind {
        if let Some(id) = self.failed_end_assume() {
            return OutcomeKind::AssumeBlocked(id);
        }
        if self.cfg.record_trace {
            self.snapshot(stmt);
        }
        OutcomeKind::AssertionViolation {
            stmt,
            step: self.steps,
        }
    }

    fn frame(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("active frame")
    }

    fn slot(&self, name: &str) -> Option<&Slot> {
        self.frames
            .last()
            .and_then(|f| f.scopes.iter().rev().find_map(|s| s.get(name)))
            .or_else(|| self.globals.get(name))
    }

    fn slot_mut(&mut self, name: &str) -> Option<&mut Slot> {
        let in_frame = self
            .frames
            .last()
            .map(|f| f.scopes.iter().any(|s| s.contains_key(name)))
            .unwrap_or(false);
        if in_frame {
            self.frames
                .last_mut()?
                .scopes
                .iter_mut()
                .rev()
                .find_map(|s| s.get_mut(name))
        } else {
            self.globals.get_mut(name)
        }
    }

    fn snapshot(&mut self, stmt: StmtId) {
        let mut vars = BTreeMap::new();
        let mut put = |name: &String, slot: &Slot| {
            let v = match slot {
                Slot::Scalar(v) => TraceValue::Int(*v),
                Slot::Array(a) => TraceValue::Array(a.clone()),
            };
            vars.insert(name.clone(), v);
        };
        for (n, s) in &self.globals {
            put(n, s);
        }
        if let Some(f) = self.frames.last() {
            for scope in &f.scopes {
                for (n, s) in scope {
                    put(n, s);
                }
            }
        }
        self.trace.push(TraceEntry { stmt, vars });
    }

    fn block(&mut self, stmts: &'a [Stmt]) -> Exec<Flow> {
        self.frame().scopes.push(BTreeMap::new());
        let mut flow = Flow::Next;
        for s in stmts {
            match self.stmt(s) {
                Ok(Flow::Next) => {}
                Ok(ret) => {
                    flow = ret;
                    break;
                }
                Err(stop) => {
                    self.frame().scopes.pop();
                    return Err(stop);
                }
            }
        }
        self.frame().scopes.pop();
        Ok(flow)
    }

    fn stmt(&mut self, s: &'a Stmt) -> Exec<Flow> {
        self.tick()?;
        let w = self.cfg.width;
        match &s.kind {
            StmtKind::Decl { name, size, init } => {
                let slot = match (size, init) {
                    (Some(size), _) => Slot::Array(vec![0; array_size(size).unwrap_or(0)]),
                    (None, Some(e)) => Slot::Scalar(self.eval(e, s.id)?.int()),
                    (None, None) => Slot::Scalar(0),
                };
                self.frame()
                    .scopes
                    .last_mut()
                    .expect("scope")
                    .insert(name.clone(), slot);
            }
            StmtKind::Assign { target, value } => match target {
                LValue::Var(n) => {
                    let v = self.eval(value, s.id)?.int();
                    if let Some(Slot::Scalar(x)) = self.slot_mut(n) {
                        *x = v;
                    }
                }
                LValue::Index(n, idx) => {
                    let i = self.eval(idx, s.id)?.int();
                    let v = self.eval(value, s.id)?.int();
                    let len = match self.slot(n) {
                        Some(Slot::Array(a)) => a.len(),
                        _ => 0,
                    };
                    if i < 0 || i as u64 >= len as u64 {
                        return Err(self.violation(s.id));
                    }
                    if let Some(Slot::Array(a)) = self.slot_mut(n) {
                        a[i as usize] = v;
                    }
                }
            },
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.eval(cond, s.id)?.bool();
                return self.block(if c { then_branch } else { else_branch });
            }
            StmtKind::While { cond, body } => {
                return self.looping(s.id, cond, body, None);
            }
            StmtKind::For {
                init,
                cond,
                step,
                body,
            } => {
                self.frame().scopes.push(BTreeMap::new());
                let result = (|| {
                    if let Some(init) = init {
                        self.stmt(init)?;
                    }
                    self.looping(s.id, cond, body, step.as_deref())
                })();
                self.frame().scopes.pop();
                return result;
            }
            StmtKind::Call { dest, func, args } => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval(a, s.id)?.int());
                }
                let f = self
                    .program
                    .function(func)
                    .expect("validated call target");
                let mut scope = BTreeMap::new();
                for (p, v) in f.params.iter().zip(vals) {
                    scope.insert(p.clone(), Slot::Scalar(v));
                }
                self.frames.push(Frame {
                    scopes: vec![scope],
                });
                let result = self.block(&f.body);
                self.frames.pop();
                let ret = match result? {
                    Flow::Return(v) => v.unwrap_or(0),
                    Flow::Next => 0,
                };
                if let Some(d) = dest {
                    if let Some(Slot::Scalar(x)) = self.slot_mut(d) {
                        *x = w.wrap(ret);
                    }
                }
            }
            StmtKind::Return(value) => {
                let v = match value {
                    Some(e) => Some(self.eval(e, s.id)?.int()),
                    None => None,
                };
                if self.cfg.record_trace {
                    self.snapshot(s.id);
                }
                return Ok(Flow::Return(v));
            }
            StmtKind::Assert(e) => {
                if !self.eval(e, s.id)?.bool() {
                    return Err(self.violation(s.id));
                }
            }
            StmtKind::Assume(e) => {
                if !self.eval(e, s.id)?.bool() {
                    return Err(OutcomeKind::AssumeBlocked(s.id));
                }
            }
            StmtKind::Log(label) => self.log.push(label.clone()),
            StmtKind::Havoc(n) => {
                let Some(&v) = self.tape.get(self.consumed) else {
                    return Err(OutcomeKind::TapeExhausted {
                        stmt: s.id,
                        var: n.clone(),
                    });
                };
                self.consumed += 1;
                if let Some(Slot::Scalar(x)) = self.slot_mut(n) {
                    *x = w.wrap(v);
                }
            }
        }
        if self.cfg.record_trace {
            self.snapshot(s.id);
        }
        Ok(Flow::Next)
    }

    fn looping(
        &mut self,
        id: StmtId,
        cond: &'a Expr,
        body: &'a [Stmt],
        step: Option<&'a Stmt>,
    ) -> Exec<Flow> {
        let mut iterations = 0u32;
        loop {
            if !self.eval(cond, id)?.bool() {
                return Ok(Flow::Next);
            }
            if self.cfg.loop_bound.is_some_and(|k| iterations >= k) {
                return Err(OutcomeKind::AssumeBlocked(id));
            }
            iterations += 1;
            self.tick()?;
            if let Flow::Return(v) = self.block(body)? {
                return Ok(Flow::Return(v));
            }
            if let Some(step) = step {
                self.stmt(step)?;
            }
        }
    }

    fn eval(&mut self, e: &Expr, at: StmtId) -> Exec<Val> {
        let w = self.cfg.width;
        Ok(match e {
            Expr::Int(v) => Val::Int(w.wrap(*v)),
            Expr::Bool(b) => Val::Bool(*b),
            Expr::Var(n) => match self.slot(n) {
                Some(Slot::Scalar(v)) => Val::Int(*v),
                _ => Val::Int(0),
            },
            Expr::Index(n, idx) => {
                let i = self.eval(idx, at)?.int();
                match self.slot(n) {
                    Some(Slot::Array(a)) if i >= 0 && (i as u64) < a.len() as u64 => {
                        Val::Int(a[i as usize])
                    }
                    _ => return Err(self.violation(at)),
                }
            }
            Expr::Unary(UnOp::Neg, inner) => Val::Int(w.wrap(self.eval(inner, at)?.int().wrapping_neg())),
            Expr::Unary(UnOp::Not, inner) => Val::Bool(!self.eval(inner, at)?.bool()),
            Expr::Binary(BinOp::And, l, r) => {
                Val::Bool(self.eval(l, at)?.bool() && self.eval(r, at)?.bool())
            }
            Expr::Binary(BinOp::Or, l, r) => {
                Val::Bool(self.eval(l, at)?.bool() || self.eval(r, at)?.bool())
            }
            Expr::Binary(op, l, r) => {
                let a = self.eval(l, at)?.int();
                let b = self.eval(r, at)?.int();
                if op.is_comparison() {
                    Val::Bool(eval_compare(*op, a, b))
                } else {
                    if matches!(op, BinOp::Div | BinOp::Rem) && b == 0 {
                        return Err(self.violation(at));
                    }
                    Val::Int(eval_arith(*op, a, b, w))
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str, tape: &[i64]) -> ExecutionOutcome {
        let p = parse(src).unwrap();
        assert!(validate(&p).is_empty(), "{:?}", validate(&p));
        execute(&p, &NondetTape::new(tape.iter().copied(), Width::DEFAULT), DEFAULT_STEP_LIMIT, Width::DEFAULT)
    }

    #[test]
    fn empty_main_completes_in_zero_steps() {
        let out = run("func main() { }", &[]);
        assert_eq!(out.kind, OutcomeKind::Completed);
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn assume_precedes_assert() {
        let out = run("func main() { assume(false); assert(false); }", &[]);
        assert!(matches!(out.kind, OutcomeKind::AssumeBlocked(_)));
    }

    #[test]
    fn havoc_reads_tape_in_order() {
        let src = "func main() { int x; int y; x = havoc(); y = havoc(); assert(x + y != 5); }";
        let out = run(src, &[2, 3]);
        assert!(matches!(out.kind, OutcomeKind::AssertionViolation { .. }));
        assert_eq!(out.consumed, 2);
        let out = run(src, &[2]);
        assert!(matches!(out.kind, OutcomeKind::TapeExhausted { ref var, .. } if var == "y"));
    }

    #[test]
    fn bounds_and_division_checks() {
        let out = run("int a[2]; func main() { int i = 2; a[i] = 1; }", &[]);
        assert!(matches!(out.kind, OutcomeKind::AssertionViolation { .. }));
        let out = run("func main() { int z = 0; int q = 4 / z; }", &[]);
        assert!(matches!(out.kind, OutcomeKind::AssertionViolation { .. }));
        // short-circuit guards the access
        let out = run("int a[2]; func main() { int i = 5; if (i < 2 && a[i] == 0) { } }", &[]);
        assert_eq!(out.kind, OutcomeKind::Completed);
    }

    #[test]
    fn wraps_at_width() {
        let p = parse("func main() { int x = 127; x = x + 1; assert(x == -128); }").unwrap();
        let out = execute(&p, &NondetTape::new([], Width::DEFAULT), 100, Width::DEFAULT);
        assert_eq!(out.kind, OutcomeKind::Completed);
    }

    #[test]
    fn calls_and_returns() {
        let src = "func sq(int a) { if (a < 0) { return 0 - a * a; } return a * a; } \
                   func main() { int r; r = sq(3); assert(r == 9); r = sq(-2); assert(r == -4); }";
        assert_eq!(run(src, &[]).kind, OutcomeKind::Completed);
    }

    #[test]
    fn step_limit_and_loop_bound() {
        let p = parse("func main() { while (true) { } }").unwrap();
        let out = execute(&p, &NondetTape::new([], Width::DEFAULT), 50, Width::DEFAULT);
        assert_eq!(out.kind, OutcomeKind::StepLimit);

        let p = parse("func main() { int i = 0; while (i < 3) { i = i + 1; } }").unwrap();
        let mut cfg = ExecConfig::new(Width::DEFAULT);
        cfg.loop_bound = Some(3);
        assert_eq!(execute_with(&p, &[], &cfg).kind, OutcomeKind::Completed);
        cfg.loop_bound = Some(2);
        assert!(matches!(execute_with(&p, &[], &cfg).kind, OutcomeKind::AssumeBlocked(_)));
    }

    #[test]
    fn end_assume_blocks_violations_and_exits() {
        let src = "int seen; func main() { int x; x = havoc(); if (x == 1) { seen = 1; } assert(x != 2); } \
                   assume_at_end(seen == 1);";
        assert!(matches!(run(src, &[2]).kind, OutcomeKind::AssumeBlocked(_)));
        assert!(matches!(run(src, &[0]).kind, OutcomeKind::AssumeBlocked(_)));
        assert_eq!(run(src, &[1]).kind, OutcomeKind::Completed);
    }

    #[test]
    fn logs_are_recorded() {
        let out = run(r#"func f() { log("f"); } func main() { f(); log("m"); f(); }"#, &[]);
        assert_eq!(out.log, vec!["f", "m", "f"]);
    }
}
