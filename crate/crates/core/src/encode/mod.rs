//! Bit-level encoding of guarded SSA into CNF.
//!
//! Integers become two's-complement bit vectors of the program width. The
//! query asks for one reachable failing check: each check gets a selector
//! `guard && !cond`, and one clause demands that some selector holds.

mod blast;
mod slice;

use std::collections::BTreeMap;

use crate::frontend::{BinOp, UnOp};
use crate::sat::{write_dimacs, CnfFormula};
use crate::transform::ssa::*;

pub use blast::{word_value, Bit, CnfBuilder, Word};
pub use slice::slice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EncodeStats {
    pub vars: u32,
    pub clauses: usize,
    pub sliced: bool,
}

#[derive(Debug, Clone)]
pub struct EncodedInstance {
    pub cnf: CnfFormula,
    /// Bits of every encoded SSA name; Booleans have a single bit.
    pub var_map: BTreeMap<SsaName, Word>,
    /// Selector of each check that survived slicing.
    pub assert_selectors: Vec<(AssertId, Bit)>,
    pub stats: EncodeStats,
}

impl EncodedInstance {
    /// Value of an integer SSA name in a model given as a literal oracle.
    pub fn int_value(&self, n: SsaName, lit: impl Fn(i32) -> bool) -> Option<i64> {
        self.var_map.get(&n).map(|bits| word_value(bits, lit))
    }
}

#[derive(Debug, Clone)]
enum Val {
    Word(Word),
    Bool(Bit),
}

impl Val {
    fn word(self) -> Word {
        match self {
            Val::Word(w) => w,
            Val::Bool(_) => panic!("expected an integer"),
        }
    }

    fn bit(self) -> Bit {
        match self {
            Val::Bool(b) => b,
            Val::Word(_) => panic!("expected a Boolean"),
        }
    }
}

struct Encoder<'a> {
    ssa: &'a SsaProgram,
    cb: CnfBuilder,
    vals: BTreeMap<SsaName, Val>,
}

/// Encodes `ssa` as a CNF that is satisfiable iff some check can fail on an
/// execution satisfying every assumption. When no check survives the query
/// is the empty clause.
pub fn encode(ssa: &SsaProgram, sliced: bool) -> EncodedInstance {
    let mut e = Encoder {
        ssa,
        cb: CnfBuilder::new(),
        vals: BTreeMap::new(),
    };
    let width = ssa.width.bits();
    for d in &ssa.defs {
        let v = match &d.expr {
            SsaExpr::Nondet => Val::Word(e.cb.fresh_word(width)),
            expr => e.expr(expr),
        };
        let v = match (ssa.info(d.name).ty, v) {
            (SsaType::Bool, Val::Word(w)) => Val::Bool(w[0]),
            (SsaType::Int, Val::Bool(b)) => {
                let mut w = vec![Bit::Const(false); width as usize];
                w[0] = b;
                Val::Word(w)
            }
            (_, v) => v,
        };
        e.vals.insert(d.name, v);
    }
    for a in &ssa.assumes {
        let g = e.name_bit(a.guard);
        let c = e.expr(&a.cond).bit();
        e.cb.clause(&[g.not(), c]);
    }
    let mut selectors = Vec::new();
    for a in &ssa.asserts {
        let g = e.name_bit(a.guard);
        let c = e.expr(&a.cond).bit();
        let sel = e.cb.and(g, c.not());
        if sel != Bit::Const(false) {
            selectors.push((a.id, sel));
        }
    }
    let query: Vec<Bit> = selectors.iter().map(|(_, b)| *b).collect();
    if query.is_empty() {
        e.cb.cnf.clauses.push(Vec::new());
    } else {
        e.cb.clause(&query);
    }

    let var_map = e
        .vals
        .into_iter()
        .map(|(n, v)| {
            let bits = match v {
                Val::Word(w) => w,
                Val::Bool(b) => vec![b],
            };
            (n, bits)
        })
        .collect();
    let cnf = e.cb.cnf;
    EncodedInstance {
        stats: EncodeStats {
            vars: cnf.num_vars,
            clauses: cnf.clauses.len(),
            sliced,
        },
        cnf,
        var_map,
        assert_selectors: selectors,
    }
}

impl Encoder<'_> {
    fn name_bit(&self, n: SsaName) -> Bit {
        match &self.vals[&n] {
            Val::Bool(b) => *b,
            Val::Word(w) => w[0],
        }
    }

    fn expr(&mut self, e: &SsaExpr) -> Val {
        let width = self.ssa.width.bits();
        match e {
            SsaExpr::Int(v) => Val::Word(self.cb.const_word(*v, width)),
            SsaExpr::Bool(b) => Val::Bool(Bit::Const(*b)),
            SsaExpr::Name(n) => self.vals[n].clone(),
            SsaExpr::Nondet => Val::Word(self.cb.fresh_word(width)),
            SsaExpr::Unary(UnOp::Not, x) => Val::Bool(self.expr(x).bit().not()),
            SsaExpr::Unary(UnOp::Neg, x) => {
                let w = self.expr(x).word();
                Val::Word(self.cb.neg(&w))
            }
            SsaExpr::Binary(op, l, r) => {
                let l = self.expr(l);
                let r = self.expr(r);
                match op {
                    BinOp::And => Val::Bool(self.cb.and(l.bit(), r.bit())),
                    BinOp::Or => Val::Bool(self.cb.or(l.bit(), r.bit())),
                    _ => {
                        let (a, b) = (l.word(), r.word());
                        let cb = &mut self.cb;
                        match op {
                            BinOp::Add => Val::Word(cb.add(&a, &b)),
                            BinOp::Sub => Val::Word(cb.sub(&a, &b)),
                            BinOp::Mul => Val::Word(cb.mul(&a, &b)),
                            BinOp::Div => Val::Word(cb.sdivmod(&a, &b).0),
                            BinOp::Rem => Val::Word(cb.sdivmod(&a, &b).1),
                            BinOp::Lt => Val::Bool(cb.slt(&a, &b)),
                            BinOp::Gt => Val::Bool(cb.slt(&b, &a)),
                            BinOp::Le => Val::Bool(cb.slt(&b, &a).not()),
                            BinOp::Ge => Val::Bool(cb.slt(&a, &b).not()),
                            BinOp::Eq => Val::Bool(cb.eq(&a, &b)),
                            BinOp::Ne => Val::Bool(cb.eq(&a, &b).not()),
                            BinOp::And | BinOp::Or => unreachable!(),
                        }
                    }
                }
            }
            SsaExpr::Select(c, t, f) => {
                let c = self.expr(c).bit();
                match (self.expr(t), self.expr(f)) {
                    (Val::Bool(x), Val::Bool(y)) => Val::Bool(self.cb.mux(c, x, y)),
                    (x, y) => {
                        let (x, y) = (x.word(), y.word());
                        Val::Word(self.cb.mux_word(c, &x, &y))
                    }
                }
            }
        }
    }
}

/// DIMACS text for an instance. Comments mapping selectors and inputs to
/// CNF variables are only written when there is something to map.
pub fn export_dimacs(inst: &EncodedInstance, ssa: &SsaProgram) -> String {
    let mut comments = Vec::new();
    for (id, bit) in &inst.assert_selectors {
        if let Bit::Lit(l) = bit {
            comments.push(format!("assert {} selector {l}", id.0));
        }
    }
    for n in &ssa.nondets {
        if let Some(bits) = inst.var_map.get(&n.name) {
            let lits: Vec<String> = bits
                .iter()
                .map(|b| match b {
                    Bit::Lit(l) => l.to_string(),
                    Bit::Const(c) => (if *c { "T" } else { "F" }).to_string(),
                })
                .collect();
            comments.push(format!("input {} bits {}", ssa.display_name(n.name), lits.join(" ")));
        }
    }
    write_dimacs(&inst.cnf, &comments)
}
