//! Integers modulo `p^N`, used as `Z_(p)` coefficients at finite precision.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{CoreError, Result};
use crate::prime::Prime;

/// Largest precision accepted; keeps `p^N` comfortably inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// p-adic valuation of a truncated integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    /// The value is `0 mod p^N`: indistinguishable from zero at this precision.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Arithmetic context for `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    prime: Prime,
    precision: u32,
    modulus: u64,
}

impl Modulus {
    pub fn new(prime: Prime, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(CoreError::Precision {
                precision,
                context: "precision must be at least 1".into(),
            });
        }
        let mut m: u64 = 1;
        for _ in 0..precision {
            m = m
                .checked_mul(prime.value() as u64)
                .filter(|&m| m <= MAX_MODULUS)
                .ok_or_else(|| CoreError::Precision {
                    precision,
                    context: format!("{prime}^{precision} does not fit in 62 bits"),
                })?;
        }
        Ok(Modulus {
            prime,
            precision,
            modulus: m,
        })
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn precision(self) -> u32 {
        self.precision
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn valuation(self, a: u64) -> Valuation {
        let a = a % self.modulus;
        if a == 0 {
            return Valuation::Infinite;
        }
        let p = self.prime.value() as u64;
        let mut e = 0;
        let mut x = a;
        while x.is_multiple_of(p) {
            x /= p;
            e += 1;
        }
        Valuation::Finite(e)
    }

    /// Writes `a = p^e * u` with `u` a unit, returning `(e, u mod p)`.
    pub fn split(self, a: u64) -> Option<(u32, u32)> {
        let e = self.valuation(a).finite()?;
        let p = self.prime.value() as u64;
        let u = (a / p.pow(e)) % p;
        Some((e, u as u32))
    }
}

/// An integer residue modulo `p^N` with its precision attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedInteger {
    value: u64,
    modulus: Modulus,
}

impl TruncatedInteger {
    pub fn new(value: i128, modulus: Modulus) -> Self {
        TruncatedInteger {
            value: modulus.reduce_i128(value),
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn precision(self) -> u32 {
        self.modulus.precision
    }

    pub fn prime(self) -> Prime {
        self.modulus.prime
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Like [`p_valuation`] but treats a zero value as an error, for callers
    /// that would otherwise silently lose a filtration weight.
    pub fn checked_valuation(self, context: &str) -> Result<u32> {
        p_valuation(self).finite().ok_or_else(|| CoreError::Precision {
            precision: self.modulus.precision,
            context: format!("{context}: value indistinguishable from zero"),
        })
    }
}

impl std::ops::Add for TruncatedInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        TruncatedInteger {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for TruncatedInteger {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        TruncatedInteger {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for TruncatedInteger {
    type Output = Self;
    fn neg(self) -> Self {
        TruncatedInteger {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

/// Largest `e` with `p^e | x`, or [`Valuation::Infinite`] when `x = 0 mod p^N`.
pub fn p_valuation(x: TruncatedInteger) -> Valuation {
    x.modulus.valuation(x.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u32) -> Modulus {
        Modulus::new(Prime::new(3).unwrap(), n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_valuation(TruncatedInteger::new(12, m(4))), Valuation::Finite(1));
        assert_eq!(p_valuation(TruncatedInteger::new(1, m(4))), Valuation::Finite(0));
        assert_eq!(p_valuation(TruncatedInteger::new(81, m(4))), Valuation::Infinite);
        assert!(TruncatedInteger::new(0, m(4)).checked_valuation("test").is_err());
    }

    #[test]
    fn arithmetic_wraps() {
        let a = TruncatedInteger::new(-1, m(2));
        assert_eq!(a.value(), 8);
        assert_eq!((a * a).value(), 1);
        assert_eq!((a + TruncatedInteger::new(1, m(2))).value(), 0);
        assert_eq!(m(3).split(18), Some((2, 2)));
    }

    #[test]
    fn rejects_oversized_precision() {
        assert!(Modulus::new(Prime::new(3).unwrap(), 0).is_err());
        assert!(Modulus::new(Prime::new(3).unwrap(), 60).is_err());
    }
}
