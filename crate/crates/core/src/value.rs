//! Fixed-width two's-complement integers.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frontend::BinOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("bit width {0} is outside 2..=64")]
pub struct WidthOutOfRange(pub u32);

/// Bit width of the program's integer type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Width(u32);

impl Width {
    pub const DEFAULT: Width = Width(8);

    pub fn new(bits: u32) -> Result<Width, WidthOutOfRange> {
        if (2..=64).contains(&bits) {
            Ok(Width(bits))
        } else {
            Err(WidthOutOfRange(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn min_value(self) -> i64 {
        if self.0 == 64 {
            i64::MIN
        } else {
            -(1i64 << (self.0 - 1))
        }
    }

    pub fn max_value(self) -> i64 {
        if self.0 == 64 {
            i64::MAX
        } else {
            (1i64 << (self.0 - 1)) - 1
        }
    }

    /// Reduces `v` modulo 2^width into the signed range.
    pub fn wrap(self, v: i64) -> i64 {
        let shift = 64 - self.0;
        (v << shift) >> shift
    }

    /// Number of distinct values, saturating at `u64::MAX`.
    pub fn cardinality(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            1u64 << self.0
        }
    }

    /// All representable values in ascending order. Only sensible for
    /// small widths.
    pub fn all_values(self) -> impl Iterator<Item = i64> {
        self.min_value()..=self.max_value()
    }
}

impl Default for Width {
    fn default() -> Self {
        Width::DEFAULT
    }
}

impl TryFrom<u32> for Width {
    type Error = WidthOutOfRange;

    fn try_from(bits: u32) -> Result<Self, Self::Error> {
        Width::new(bits)
    }
}

impl From<Width> for u32 {
    fn from(w: Width) -> u32 {
        w.0
    }
}

impl fmt::Display for Width {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Integer arithmetic as both the interpreter and the bit-level circuits
/// define it. Operands must already be wrapped. Division and remainder
/// truncate toward zero; a zero divisor yields 0 for `/` and the dividend
/// for `%`.
pub fn eval_arith(op: BinOp, a: i64, b: i64, w: Width) -> i64 {
    let r = match op {
        BinOp::Add => a.wrapping_add(b),
        BinOp::Sub => a.wrapping_sub(b),
        BinOp::Mul => a.wrapping_mul(b),
        BinOp::Div if b == 0 => 0,
        BinOp::Rem if b == 0 => a,
        BinOp::Div => a.wrapping_div(b),
        BinOp::Rem => a.wrapping_rem(b),
        _ => panic!("{op:?} is not arithmetic"),
    };
    w.wrap(r)
}

pub fn eval_compare(op: BinOp, a: i64, b: i64) -> bool {
    match op {
        BinOp::Lt => a < b,
        BinOp::Le => a <= b,
        BinOp::Gt => a > b,
        BinOp::Ge => a >= b,
        BinOp::Eq => a == b,
        BinOp::Ne => a != b,
        _ => panic!("{op:?} is not a comparison"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_twos_complement() {
        let w = Width::new(4).unwrap();
        assert_eq!(w.wrap(7), 7);
        assert_eq!(w.wrap(8), -8);
        assert_eq!(w.wrap(-9), 7);
        assert_eq!(w.wrap(16), 0);
        assert_eq!(Width::new(64).unwrap().wrap(i64::MIN), i64::MIN);
    }

    #[test]
    fn width_bounds() {
        assert!(Width::new(1).is_err());
        assert!(Width::new(65).is_err());
        assert_eq!(Width::new(8).unwrap().min_value(), -128);
        assert_eq!(Width::new(8).unwrap().all_values().count(), 256);
    }

    #[test]
    fn min_div_minus_one_wraps() {
        let w = Width::new(8).unwrap();
        assert_eq!(eval_arith(BinOp::Div, -128, -1, w), -128);
        assert_eq!(eval_arith(BinOp::Rem, -128, -1, w), 0);
        assert_eq!(eval_arith(BinOp::Div, -7, 2, w), -3);
        assert_eq!(eval_arith(BinOp::Rem, -7, 2, w), -1);
    }
}
