use std::sync::atomic::Ordering;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use super::{Model, SolveBudget, SolveResult, UnknownReason};

type Lit = u32;
type CRef = u32;

const UNDEF: u8 = 2;
const NO_REASON: CRef = u32::MAX;
const RESTART_UNIT: u64 = 100;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RANDOM_FREQ: f64 = 0.02;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + (dimacs < 0) as u32
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: CRef,
    blocker: Lit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

/// Incremental-free CDCL solver: two watched literals, first-UIP learning
/// with clause minimization, VSIDS, phase saving, Luby restarts and
/// activity-based learnt clause deletion.
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Clause>,
    learnts: Vec<CRef>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<CRef>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    ok: bool,
    rng: ChaCha8Rng,
    max_learnts: f64,
    stats: SolveStats,
}

fn luby(mut i: u64) -> u64 {
    // i is 0-based
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

impl Solver {
    pub fn new(num_vars: u32, seed: u64) -> Solver {
        let n = num_vars as usize;
        let mut s = Solver {
            num_vars: n,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            polarity: vec![true; n],
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(n),
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: vec![false; n],
            ok: true,
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_learnts: 0.0,
            stats: SolveStats::default(),
        };
        for v in 0..n as u32 {
            s.heap.insert(v, &s.activity);
        }
        s
    }

    pub fn stats(&self) -> SolveStats {
        self.stats
    }

    fn value(&self, l: Lit) -> u8 {
        let a = self.assigns[var(l)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause of DIMACS literals. Returns false once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, dimacs: &[i32]) -> bool {
        if !self.ok {
            return false;
        }
        let mut lits: Vec<Lit> = dimacs.iter().map(|&l| lit_of(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == neg(w[1])) {
            return true;
        }
        lits.retain(|&l| self.value(l) != 0);
        if lits.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        match lits.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.enqueue(lits[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(lits, false);
            }
        }
        self.ok
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        let cref = self.clauses.len() as CRef;
        self.watches[neg(lits[0]) as usize].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[neg(lits[1]) as usize].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: CRef) {
        let v = var(l);
        self.assigns[v] = (l & 1 == 0) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<CRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                if self.clauses[cref as usize].deleted {
                    continue;
                }
                let c = &mut self.clauses[cref as usize].lits;
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                let w2 = Watcher {
                    cref,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == 1 {
                    ws[j] = w2;
                    j += 1;
                    continue;
                }
                // look for a new literal to watch
                let c = &self.clauses[cref as usize].lits;
                let mut found = None;
                for k in 2..c.len() {
                    if self.value(c[k]) != 0 {
                        found = Some(k);
                        break;
                    }
                }
                if let Some(k) = found {
                    let c = &mut self.clauses[cref as usize].lits;
                    c.swap(1, k);
                    let nw = neg(c[1]) as usize;
                    self.watches[nw].push(w2);
                    continue;
                }
                ws[j] = w2;
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[p as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            self.bump_clause(confl);
            let lits = self.clauses[confl as usize].lits.clone();
            let start = if p.is_some() { 1 } else { 0 };
            for &q in &lits[start..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[var(lit)];
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            // the reason clause has the implied literal first
            let c = &mut self.clauses[confl as usize].lits;
            if c[0] != lit {
                let k = c.iter().position(|&x| x == lit).expect("reason contains literal");
                c.swap(0, k);
            }
        }
        learnt[0] = neg(p.expect("conflict has a UIP"));

        // drop literals implied by the rest of the clause
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                let r = self.reason[var(l)];
                if r == NO_REASON {
                    return true;
                }
                let c = &self.clauses[r as usize].lits;
                c.iter()
                    .any(|&q| var(q) != var(l) && !self.seen[var(q)] && self.level[var(q)] > 0)
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut learnt: Vec<Lit> = learnt
            .into_iter()
            .zip(keep)
            .filter_map(|(l, k)| k.then_some(l))
            .collect();

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[var(learnt[1])]
        };
        (learnt, bt)
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = var(l);
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.polarity[v] = l & 1 == 1;
            self.heap.insert(v as u32, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if self.num_vars > 0 && self.rng.gen::<f64>() < RANDOM_FREQ {
            let v = self.rng.gen_range(0..self.num_vars);
            if self.assigns[v] == UNDEF {
                return Some(2 * v as u32 + self.polarity[v] as u32);
            }
        }
        while let Some(v) = self.heap.pop(&self.activity) {
            let v = v as usize;
            if self.assigns[v] == UNDEF {
                return Some(2 * v as u32 + self.polarity[v] as u32);
            }
        }
        None
    }

    fn locked(&self, cref: CRef) -> bool {
        let c = &self.clauses[cref as usize];
        let v = var(c.lits[0]);
        self.reason[v] == cref && self.value(c.lits[0]) == 1
    }

    fn reduce_db(&mut self) {
        let mut ls = std::mem::take(&mut self.learnts);
        ls.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .total_cmp(&self.clauses[b as usize].activity)
        });
        let half = ls.len() / 2;
        let mut kept = Vec::with_capacity(ls.len());
        for (i, cref) in ls.into_iter().enumerate() {
            let c = &self.clauses[cref as usize];
            if i < half && c.lits.len() > 2 && !self.locked(cref) {
                let c = &mut self.clauses[cref as usize];
                c.deleted = true;
                c.lits = Vec::new();
            } else {
                kept.push(cref);
            }
        }
        self.learnts = kept;
        for ws in &mut self.watches {
            let clauses = &self.clauses;
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
    }

    fn check_budget(&self, budget: &SolveBudget, start: Instant) -> Option<UnknownReason> {
        if let Some(flag) = &budget.cancel {
            if flag.load(Ordering::Relaxed) {
                return Some(UnknownReason::Cancelled);
            }
        }
        if let Some(max) = budget.max_conflicts {
            if self.stats.conflicts >= max {
                return Some(UnknownReason::ConflictLimit);
            }
        }
        if let Some(t) = budget.max_time {
            if start.elapsed() >= t {
                return Some(UnknownReason::TimeLimit);
            }
        }
        None
    }

    pub fn solve(&mut self, budget: &SolveBudget) -> SolveResult {
        let start = Instant::now();
        if !self.ok {
            return SolveResult::Unsat;
        }
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat;
        }
        if let Some(r) = self.check_budget(budget, start) {
            if r == UnknownReason::Cancelled {
                return SolveResult::Unknown(r);
            }
        }
        self.max_learnts = (self.clauses.len() as f64 / 3.0).max(2000.0);
        let mut restart = 0u64;
        loop {
            let limit = luby(restart) * RESTART_UNIT;
            let mut conflicts_here = 0u64;
            loop {
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    conflicts_here += 1;
                    if self.decision_level() == 0 {
                        self.ok = false;
                        return SolveResult::Unsat;
                    }
                    let (learnt, bt) = self.analyze(confl);
                    self.cancel_until(bt);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], NO_REASON);
                    } else {
                        let first = learnt[0];
                        let cref = self.attach(learnt, true);
                        self.bump_clause(cref);
                        self.enqueue(first, cref);
                    }
                    self.stats.learnt_clauses += 1;
                    self.var_inc /= VAR_DECAY;
                    self.cla_inc /= CLAUSE_DECAY;
                    if self.stats.conflicts % 64 == 0 || budget.max_conflicts.is_some() {
                        if let Some(r) = self.check_budget(budget, start) {
                            self.cancel_until(0);
                            return SolveResult::Unknown(r);
                        }
                    }
                } else {
                    if conflicts_here >= limit {
                        break;
                    }
                    if self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                        self.reduce_db();
                        self.max_learnts *= 1.1;
                    }
                    match self.pick_branch() {
                        None => {
                            let values = (0..self.num_vars).map(|v| self.assigns[v] == 1).collect();
                            self.cancel_until(0);
                            return SolveResult::Sat(Model::from_values(values));
                        }
                        Some(l) => {
                            self.stats.decisions += 1;
                            if self.stats.decisions % 1024 == 0 {
                                if let Some(r) = self.check_budget(budget, start) {
                                    self.cancel_until(0);
                                    return SolveResult::Unknown(r);
                                }
                            }
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(l, NO_REASON);
                        }
                    }
                }
            }
            self.stats.restarts += 1;
            restart += 1;
            self.cancel_until(0);
            if let Some(r) = self.check_budget(budget, start) {
                return SolveResult::Unknown(r);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_sequence() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn literal_encoding() {
        assert_eq!(lit_of(1), 0);
        assert_eq!(lit_of(-1), 1);
        assert_eq!(neg(lit_of(3)), lit_of(-3));
        assert_eq!(var(lit_of(-5)), 4);
    }
}
