use std::collections::HashMap;

use crate::sat::CnfFormula;

/// A literal that may be a known constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bit {
    Const(bool),
    Lit(i32),
}

impl Bit {
    pub fn not(self) -> Bit {
        match self {
            Bit::Const(b) => Bit::Const(!b),
            Bit::Lit(l) => Bit::Lit(-l),
        }
    }
}

/// Fixed-width bit vector, least significant bit first.
pub type Word = Vec<Bit>;

/// Tseitin gate builder with constant folding and structural hashing.
#[derive(Debug, Default)]
pub struct CnfBuilder {
    pub cnf: CnfFormula,
    and_cache: HashMap<(i32, i32), i32>,
    xor_cache: HashMap<(i32, i32), i32>,
    mux_cache: HashMap<(i32, i32, i32), i32>,
}

impl CnfBuilder {
    pub fn new() -> CnfBuilder {
        CnfBuilder::default()
    }

    pub fn fresh(&mut self) -> Bit {
        Bit::Lit(self.cnf.new_var())
    }

    pub fn fresh_word(&mut self, width: u32) -> Word {
        (0..width).map(|_| self.fresh()).collect()
    }

    /// Adds a clause, dropping false constants and skipping satisfied ones.
    pub fn clause(&mut self, bits: &[Bit]) {
        let mut lits = Vec::with_capacity(bits.len());
        for b in bits {
            match *b {
                Bit::Const(true) => return,
                Bit::Const(false) => {}
                Bit::Lit(l) => lits.push(l),
            }
        }
        self.cnf.clauses.push(lits);
    }

    pub fn and(&mut self, a: Bit, b: Bit) -> Bit {
        let (a, b) = match (a, b) {
            (Bit::Const(false), _) | (_, Bit::Const(false)) => return Bit::Const(false),
            (Bit::Const(true), x) | (x, Bit::Const(true)) => return x,
            (Bit::Lit(a), Bit::Lit(b)) => (a, b),
        };
        if a == b {
            return Bit::Lit(a);
        }
        if a == -b {
            return Bit::Const(false);
        }
        let key = (a.min(b), a.max(b));
        if let Some(&m) = self.and_cache.get(&key) {
            return Bit::Lit(m);
        }
        let m = self.cnf.new_var();
        self.cnf.clauses.push(vec![-m, a]);
        self.cnf.clauses.push(vec![-m, b]);
        self.cnf.clauses.push(vec![m, -a, -b]);
        self.and_cache.insert(key, m);
        Bit::Lit(m)
    }

    pub fn or(&mut self, a: Bit, b: Bit) -> Bit {
        self.and(a.not(), b.not()).not()
    }

    pub fn xor(&mut self, a: Bit, b: Bit) -> Bit {
        let (a, b) = match (a, b) {
            (Bit::Const(c), x) | (x, Bit::Const(c)) => return if c { x.not() } else { x },
            (Bit::Lit(a), Bit::Lit(b)) => (a, b),
        };
        if a == b {
            return Bit::Const(false);
        }
        if a == -b {
            return Bit::Const(true);
        }
        let flip = (a < 0) != (b < 0);
        let (x, y) = (a.abs().min(b.abs()), a.abs().max(b.abs()));
        let m = match self.xor_cache.get(&(x, y)) {
            Some(&m) => m,
            None => {
                let m = self.cnf.new_var();
                self.cnf.clauses.push(vec![-m, x, y]);
                self.cnf.clauses.push(vec![-m, -x, -y]);
                self.cnf.clauses.push(vec![m, -x, y]);
                self.cnf.clauses.push(vec![m, x, -y]);
                self.xor_cache.insert((x, y), m);
                m
            }
        };
        if flip {
            Bit::Lit(-m)
        } else {
            Bit::Lit(m)
        }
    }

    pub fn iff(&mut self, a: Bit, b: Bit) -> Bit {
        self.xor(a, b).not()
    }

    /// `c ? t : e`
    pub fn mux(&mut self, c: Bit, t: Bit, e: Bit) -> Bit {
        match (c, t, e) {
            (Bit::Const(true), _, _) => return t,
            (Bit::Const(false), _, _) => return e,
            _ if t == e => return t,
            (_, Bit::Const(true), Bit::Const(false)) => return c,
            (_, Bit::Const(false), Bit::Const(true)) => return c.not(),
            (_, Bit::Const(false), _) => return self.and(c.not(), e),
            (_, Bit::Const(true), _) => return self.or(c, e),
            (_, _, Bit::Const(false)) => return self.and(c, t),
            (_, _, Bit::Const(true)) => return self.or(c.not(), t),
            _ => {}
        }
        let (Bit::Lit(c), Bit::Lit(t), Bit::Lit(e)) = (c, t, e) else {
            unreachable!("constants handled above")
        };
        if let Some(&m) = self.mux_cache.get(&(c, t, e)) {
            return Bit::Lit(m);
        }
        let m = self.cnf.new_var();
        self.cnf.clauses.push(vec![-c, -t, m]);
        self.cnf.clauses.push(vec![-c, t, -m]);
        self.cnf.clauses.push(vec![c, -e, m]);
        self.cnf.clauses.push(vec![c, e, -m]);
        self.cnf.clauses.push(vec![-t, -e, m]);
        self.cnf.clauses.push(vec![t, e, -m]);
        self.mux_cache.insert((c, t, e), m);
        Bit::Lit(m)
    }

    pub fn const_word(&self, v: i64, width: u32) -> Word {
        (0..width).map(|i| Bit::Const((v >> i) & 1 == 1)).collect()
    }

    pub fn mux_word(&mut self, c: Bit, t: &[Bit], e: &[Bit]) -> Word {
        t.iter().zip(e).map(|(&x, &y)| self.mux(c, x, y)).collect()
    }

    fn majority(&mut self, a: Bit, b: Bit, c: Bit) -> Bit {
        let ab = self.and(a, b);
        let x = self.xor(a, b);
        let cx = self.and(c, x);
        self.or(ab, cx)
    }

    /// Sum and carry-out of `a + b + carry`.
    pub fn add_carry(&mut self, a: &[Bit], b: &[Bit], mut carry: Bit) -> (Word, Bit) {
        let mut out = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let s = self.xor(x, y);
            out.push(self.xor(s, carry));
            carry = self.majority(x, y, carry);
        }
        (out, carry)
    }

    pub fn add(&mut self, a: &[Bit], b: &[Bit]) -> Word {
        self.add_carry(a, b, Bit::Const(false)).0
    }

    pub fn sub(&mut self, a: &[Bit], b: &[Bit]) -> Word {
        let nb: Word = b.iter().map(|x| x.not()).collect();
        self.add_carry(a, &nb, Bit::Const(true)).0
    }

    pub fn neg(&mut self, a: &[Bit]) -> Word {
        let zero = vec![Bit::Const(false); a.len()];
        self.sub(&zero, a)
    }

    pub fn mul(&mut self, a: &[Bit], b: &[Bit]) -> Word {
        let n = a.len();
        let mut acc = vec![Bit::Const(false); n];
        for (i, &bi) in b.iter().enumerate() {
            if bi == Bit::Const(false) {
                continue;
            }
            let mut partial = vec![Bit::Const(false); n];
            for j in 0..n - i {
                partial[i + j] = self.and(a[j], bi);
            }
            acc = self.add(&acc, &partial);
        }
        acc
    }

    /// Unsigned `a < b`.
    pub fn ult(&mut self, a: &[Bit], b: &[Bit]) -> Bit {
        // a - b borrows iff a < b
        let mut carry = Bit::Const(true);
        for (&x, &y) in a.iter().zip(b) {
            carry = self.majority(x, y.not(), carry);
        }
        carry.not()
    }

    /// Signed `a < b`.
    pub fn slt(&mut self, a: &[Bit], b: &[Bit]) -> Bit {
        let n = a.len();
        let mut a2 = a.to_vec();
        let mut b2 = b.to_vec();
        a2[n - 1] = a[n - 1].not();
        b2[n - 1] = b[n - 1].not();
        self.ult(&a2, &b2)
    }

    pub fn eq(&mut self, a: &[Bit], b: &[Bit]) -> Bit {
        let mut acc = Bit::Const(true);
        for (&x, &y) in a.iter().zip(b) {
            let e = self.iff(x, y);
            acc = self.and(acc, e);
        }
        acc
    }

    pub fn is_zero(&mut self, a: &[Bit]) -> Bit {
        let zero = vec![Bit::Const(false); a.len()];
        self.eq(a, &zero)
    }

    /// Unsigned restoring division; a zero divisor gives an all-ones
    /// quotient and the dividend as remainder.
    pub fn udivmod(&mut self, a: &[Bit], b: &[Bit]) -> (Word, Word) {
        let n = a.len();
        let mut rem = vec![Bit::Const(false); n + 1];
        let mut bx = b.to_vec();
        bx.push(Bit::Const(false));
        let mut q = vec![Bit::Const(false); n];
        for i in (0..n).rev() {
            rem.pop();
            rem.insert(0, a[i]);
            let lt = self.ult(&rem, &bx);
            let diff = self.sub(&rem, &bx);
            let ge = lt.not();
            q[i] = ge;
            rem = self.mux_word(ge, &diff, &rem);
        }
        rem.truncate(n);
        (q, rem)
    }

    /// Signed division truncating toward zero, with `x / 0 = 0` and
    /// `x % 0 = x`.
    pub fn sdivmod(&mut self, a: &[Bit], b: &[Bit]) -> (Word, Word) {
        let n = a.len();
        let sa = a[n - 1];
        let sb = b[n - 1];
        let na = self.neg(a);
        let nb = self.neg(b);
        let abs_a = self.mux_word(sa, &na, a);
        let abs_b = self.mux_word(sb, &nb, b);
        let (q, r) = self.udivmod(&abs_a, &abs_b);
        let qs = self.xor(sa, sb);
        let nq = self.neg(&q);
        let nr = self.neg(&r);
        let q = self.mux_word(qs, &nq, &q);
        let r = self.mux_word(sa, &nr, &r);
        let zero = self.is_zero(b);
        let zeros = vec![Bit::Const(false); n];
        let q = self.mux_word(zero, &zeros, &q);
        let r = self.mux_word(zero, a, &r);
        (q, r)
    }
}

/// Reads a word's signed value under a model.
pub fn word_value(bits: &[Bit], lit: impl Fn(i32) -> bool) -> i64 {
    let n = bits.len();
    let mut v: i64 = 0;
    for (i, b) in bits.iter().enumerate() {
        let set = match *b {
            Bit::Const(c) => c,
            Bit::Lit(l) => lit(l),
        };
        if set {
            v |= 1i64 << i;
        }
    }
    if n < 64 && (v >> (n - 1)) & 1 == 1 {
        v -= 1i64 << n;
    }
    v
}
