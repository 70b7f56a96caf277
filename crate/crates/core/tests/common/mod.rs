#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FEATURES: [&str; 2] = ["f1", "f2"];

/// Generator of small well-formed programs over `x`, `y`, `z`, a global
/// `g` and a global array `a[3]`, with at most three havocs on any path
/// outside loops and none inside them.
pub struct ProgramGen {
    rng: ChaCha8Rng,
    havocs: u32,
    loops: u32,
}

const VARS: [&str; 4] = ["x", "y", "z", "g"];

impl ProgramGen {
    pub fn new(seed: u64) -> ProgramGen {
        ProgramGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            havocs: 0,
            loops: 0,
        }
    }

    fn var(&mut self) -> &'static str {
        VARS.choose(&mut self.rng).unwrap()
    }

    fn int_expr(&mut self, depth: u32) -> String {
        let r = self.rng.gen_range(0..10);
        if depth == 0 || r < 4 {
            return if self.rng.gen_bool(0.5) {
                self.var().to_string()
            } else {
                self.rng.gen_range(-3..=3).to_string()
            };
        }
        match r {
            4 => format!("a[{}]", self.index()),
            5 => format!("-{}", self.int_expr(depth - 1)),
            _ => {
                let op = ["+", "-", "*", "+", "-", "*", "/", "%"].choose(&mut self.rng).unwrap();
                format!("({} {op} {})", self.int_expr(depth - 1), self.int_expr(depth - 1))
            }
        }
    }

    fn index(&mut self) -> String {
        if self.rng.gen_bool(0.75) {
            self.rng.gen_range(0..3).to_string()
        } else {
            self.var().to_string()
        }
    }

    fn cond(&mut self, depth: u32) -> String {
        let r = self.rng.gen_range(0..10);
        if depth == 0 || r < 6 {
            let op = ["<", "<=", ">", ">=", "==", "!="].choose(&mut self.rng).unwrap();
            return format!("{} {op} {}", self.int_expr(1), self.int_expr(1));
        }
        match r {
            6 => format!("!({})", self.cond(depth - 1)),
            7 | 8 => format!("({}) && ({})", self.cond(depth - 1), self.cond(depth - 1)),
            _ => format!("({}) || ({})", self.cond(depth - 1), self.cond(depth - 1)),
        }
    }

    fn block(&mut self, n: usize, depth: u32, in_loop: bool, out: &mut String, indent: usize) {
        for _ in 0..n {
            self.stmt(depth, in_loop, out, indent);
        }
    }

    fn stmt(&mut self, depth: u32, in_loop: bool, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        let r = self.rng.gen_range(0..20);
        match r {
            0..=2 if !in_loop && self.havocs < 3 => {
                self.havocs += 1;
                let v = self.var();
                out.push_str(&format!("{pad}{v} = havoc();\n"));
            }
            3..=6 => {
                let v = self.var();
                let e = self.int_expr(2);
                out.push_str(&format!("{pad}{v} = {e};\n"));
            }
            7 => {
                let i = self.index();
                let e = self.int_expr(1);
                out.push_str(&format!("{pad}a[{i}] = {e};\n"));
            }
            8..=10 if depth > 0 => {
                let c = self.cond(1);
                out.push_str(&format!("{pad}if ({c}) {{\n"));
                let n = self.rng.gen_range(1..=3);
                // havocs on either branch count against the same path budget
                let saved = self.havocs;
                self.block(n, depth - 1, in_loop, out, indent + 1);
                let then_havocs = self.havocs;
                self.havocs = saved;
                out.push_str(&format!("{pad}}} else {{\n"));
                let n = self.rng.gen_range(0..=2);
                self.block(n, depth - 1, in_loop, out, indent + 1);
                self.havocs = self.havocs.max(then_havocs);
                out.push_str(&format!("{pad}}}\n"));
            }
            11 if depth > 0 && self.loops < 2 => {
                let c = format!("l{}", self.loops);
                self.loops += 1;
                let bound = self.rng.gen_range(1..=4);
                let extra = self.cond(0);
                out.push_str(&format!("{pad}int {c} = 0;\n"));
                out.push_str(&format!("{pad}while ({c} < {bound} && ({extra})) {{\n"));
                let n = self.rng.gen_range(1..=2);
                self.block(n, depth - 1, true, out, indent + 1);
                out.push_str(&format!("{pad}  {c} = {c} + 1;\n{pad}}}\n"));
            }
            12 => {
                let f = FEATURES.choose(&mut self.rng).unwrap();
                out.push_str(&format!("{pad}log(\"{f}\");\n"));
            }
            13 => {
                let c = self.cond(1);
                out.push_str(&format!("{pad}assume({c});\n"));
            }
            14 => {
                let v = self.var();
                let e = self.int_expr(1);
                out.push_str(&format!("{pad}{v} = step({e});\n"));
            }
            15 | 16 => {
                let c = self.cond(1);
                out.push_str(&format!("{pad}assert({c});\n"));
            }
            _ => {
                let v = self.var();
                let w = self.var();
                out.push_str(&format!("{pad}assert({v} != {w} || {v} == {w});\n"));
            }
        }
    }

    pub fn program(&mut self) -> String {
        let mut body = String::new();
        let n = self.rng.gen_range(2..=6);
        self.block(n, 2, false, &mut body, 1);
        let c = self.cond(0);
        body.push_str(&format!("  assert({c});\n"));
        format!(
            "int g;\nint a[3];\n\nfunc step(int p) {{\n  if (p > 1) {{\n    log(\"f2\");\n    return p - 1;\n  }}\n  return p + 1;\n}}\n\nfunc main() {{\n  int x;\n  int y;\n  int z;\n{body}}}\n"
        )
    }
}

pub fn random_program(seed: u64) -> String {
    ProgramGen::new(seed).program()
}
