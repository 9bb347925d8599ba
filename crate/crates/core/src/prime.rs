//! Odd primes and arithmetic in the prime field.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::CoreError;

/// An odd prime `p`, validated at construction.
///
/// The workbench only ever works at odd primes; `p = 2` is rejected because the
/// Cartan–Eilenberg splitting used throughout does not hold there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self, CoreError> {
        if !(3..=(1 << 15)).contains(&p) || !is_prime(p) {
            return Err(CoreError::InvalidPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// `q = 2(p - 1)`, the degree of `t_1`.
    #[inline]
    pub fn q(self) -> u32 {
        2 * (self.0 - 1)
    }

    /// `p^e` as a `u64`. Panics on overflow, which never happens for the
    /// degree ranges the workbench is meant for.
    pub fn pow(self, e: u32) -> u64 {
        (self.0 as u64)
            .checked_pow(e)
            .unwrap_or_else(|| panic!("{}^{} overflows u64", self.0, e))
    }

    /// Internal degree `2(p^n - 1)` of `t_n` and `v_n`.
    pub fn generator_degree(self, n: u32) -> u32 {
        (2 * (self.pow(n) - 1)) as u32
    }

    /// Internal degree `2p^n - 1` of the exterior generator `tau_n`.
    pub fn exterior_degree(self, n: u32) -> u32 {
        (2 * self.pow(n) - 1) as u32
    }

    /// Number of polynomial generators `t_1, t_2, ...` of degree at most `t_max`.
    pub fn generators_below(self, t_max: u32) -> usize {
        (1..).take_while(|&n| self.generator_degree(n) <= t_max).count()
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero mod {}", self.0);
        let mut result = 1u64;
        let mut base = (a % self.0) as u64;
        let mut e = self.0 - 2;
        let m = self.0 as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        result as u32
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for Prime {
    type Error = CoreError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `F_p` together with its prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    residue: u32,
    prime: Prime,
}

impl FpScalar {
    pub fn new(value: i64, prime: Prime) -> Self {
        FpScalar {
            residue: prime.reduce(value),
            prime,
        }
    }

    pub fn residue(self) -> u32 {
        self.residue
    }

    pub fn prime(self) -> Prime {
        self.prime
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| FpScalar {
            residue: self.prime.inv(self.residue),
            prime: self.prime,
        })
    }
}

impl std::ops::Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.prime, rhs.prime);
        FpScalar {
            residue: self.prime.add(self.residue, rhs.residue),
            prime: self.prime,
        }
    }
}

impl std::ops::Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.prime, rhs.prime);
        FpScalar {
            residue: self.prime.mul(self.residue, rhs.residue),
            prime: self.prime,
        }
    }
}

impl std::ops::Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar {
            residue: self.prime.neg(self.residue),
            prime: self.prime,
        }
    }
}
