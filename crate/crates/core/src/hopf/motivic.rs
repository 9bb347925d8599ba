//! Monomials of the motivic dual Steenrod algebra over `C`,
//! `F_p[τ] ⊗ F_p[t_1, t_2, ...] ⊗ E[τ_0, τ_1, ...]`.

use serde::{Deserialize, Serialize};

use super::steenrod::SteenrodMonomial;
use crate::prime::Prime;

/// Internal degree together with motivic weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub t: u32,
    pub u: i64,
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Self) -> Self {
        Bidegree {
            t: self.t + rhs.t,
            u: self.u + rhs.u,
        }
    }
}

/// `τ^n · m` with `τ` in bidegree `(0, -1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotivicMonomial {
    pub tau_power: u32,
    pub base: SteenrodMonomial,
}

impl MotivicMonomial {
    pub fn new(tau_power: u32, base: SteenrodMonomial) -> Self {
        MotivicMonomial { tau_power, base }
    }

    pub fn bidegree(&self, p: Prime) -> Bidegree {
        Bidegree {
            t: self.base.degree(p),
            u: self.base.weight(p) as i64 - self.tau_power as i64,
        }
    }

    /// Product; `None` when an exterior generator repeats.
    pub fn mul(&self, other: &Self) -> Option<(bool, Self)> {
        let (neg, base) = self.base.mul(&other.base)?;
        Some((neg, MotivicMonomial::new(self.tau_power + other.tau_power, base)))
    }
}

impl SteenrodMonomial {
    pub fn bidegree(&self, p: Prime) -> Bidegree {
        Bidegree {
            t: self.degree(p),
            u: self.weight(p) as i64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_bidegrees() {
        let p = Prime::new(3).unwrap();
        assert_eq!(SteenrodMonomial::t_power(1, 1).bidegree(p), Bidegree { t: 4, u: 2 });
        assert_eq!(SteenrodMonomial::tau(0).bidegree(p), Bidegree { t: 1, u: 0 });
        assert_eq!(SteenrodMonomial::unit().bidegree(p), Bidegree { t: 0, u: 0 });
        let tau = MotivicMonomial::new(1, SteenrodMonomial::unit());
        assert_eq!(tau.bidegree(p), Bidegree { t: 0, u: -1 });
    }

    #[test]
    fn bidegree_is_additive() {
        let p = Prime::new(5).unwrap();
        let a = MotivicMonomial::new(2, SteenrodMonomial::new(&[1], &[1]));
        let b = MotivicMonomial::new(1, SteenrodMonomial::new(&[0], &[0, 1]));
        let (_, ab) = a.mul(&b).unwrap();
        assert_eq!(ab.bidegree(p), a.bidegree(p) + b.bidegree(p));
    }
}
