//! The Hopf algebroid `(BP_*, BP_*BP)` in Hazewinkel generators, truncated by
//! internal degree.
//!
//! With `m_0 = 1` and the logarithm coefficients
//!
//! ```text
//! p m_n = Σ_{0≤i<n} m_i v_{n-i}^{p^i}
//! η_R(m_n) = Σ_{i+j=n} m_i t_j^{p^i}
//! Σ_{i+j=n} m_i Δ(t_j)^{p^i} = Σ_{i+j+k=n} m_i t_j^{p^i} ⊗ t_k^{p^{i+j}}
//! ```
//!
//! the right unit on `v_n` and the coproduct on `t_n` are solved for with exact
//! rationals and then checked to be p-integral.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use super::poly::{weighted_degree, Poly};
use crate::error::{CoreError, Result};
use crate::linalg::Valuation;
use crate::prime::Prime;

/// An element of `BP_*BP ⊗ Q`: a polynomial in `v_1..v_m` and `t_1..t_m` with
/// rational coefficients. Elements exposed by [`BpStructure`] are p-integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpElement {
    ngens: usize,
    poly: Poly<BigRational>,
}

impl BpElement {
    pub fn zero(ngens: usize) -> Self {
        BpElement {
            ngens,
            poly: Poly::zero(2 * ngens),
        }
    }

    pub fn integer(ngens: usize, c: i64) -> Self {
        BpElement {
            ngens,
            poly: Poly::constant(2 * ngens, BigRational::from_integer(c.into())),
        }
    }

    /// `v_n`, `n ≥ 1`.
    pub fn v(ngens: usize, n: usize) -> Self {
        assert!((1..=ngens).contains(&n));
        BpElement {
            ngens,
            poly: Poly::var_power(2 * ngens, n - 1, 1),
        }
    }

    /// `t_n`, `n ≥ 1`.
    pub fn t(ngens: usize, n: usize) -> Self {
        assert!((1..=ngens).contains(&n));
        BpElement {
            ngens,
            poly: Poly::var_power(2 * ngens, ngens + n - 1, 1),
        }
    }

    /// `c · v^E t^R`.
    pub fn monomial(ngens: usize, c: BigRational, v: &[u32], t: &[u32]) -> Self {
        let mut e = vec![0; 2 * ngens];
        e[..v.len()].copy_from_slice(v);
        e[ngens..ngens + t.len()].copy_from_slice(t);
        let mut poly = Poly::zero(2 * ngens);
        poly.add_term(e, c);
        BpElement { ngens, poly }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Terms as `(coefficient, v-exponents, t-exponents)`.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &[u32], &[u32])> {
        self.poly.terms().map(|(e, c)| (c, &e[..self.ngens], &e[self.ngens..]))
    }

    pub fn has_t(&self) -> bool {
        self.terms().any(|(_, _, t)| t.iter().any(|&x| x > 0))
    }

    pub fn degree_bound(&self, p: Prime) -> u32 {
        let degs = variable_degrees(p, self.ngens, 2);
        self.poly.terms().map(|(e, _)| weighted_degree(e, &degs)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut poly = self.poly.clone();
        poly.add_assign(&other.poly);
        BpElement { ngens: self.ngens, poly }
    }

    pub fn mul(&self, other: &Self, p: Prime) -> Self {
        let degs = variable_degrees(p, self.ngens, 2);
        BpElement {
            ngens: self.ngens,
            poly: self.poly.mul_truncated(&other.poly, &degs, u32::MAX),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        BpElement {
            ngens: self.ngens,
            poly: self.poly.scale(&BigRational::from_integer(c.into())),
        }
    }
}

impl fmt::Display for BpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, v, t) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in v.iter().enumerate() {
                if e > 0 {
                    write!(f, " v{}^{}", i + 1, e)?;
                }
            }
            for (i, &e) in t.iter().enumerate() {
                if e > 0 {
                    write!(f, " t{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// p-adic valuation of a rational; negative for denominators divisible by `p`.
pub fn rational_valuation(x: &BigRational, p: Prime) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p.value());
    let count = |mut n: BigInt| {
        let mut e = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        e
    };
    Some(count(x.numer().abs()) - count(x.denom().abs()))
}

/// Largest `k` with `x ∈ I^k BP_*BP`: the minimum over terms of the p-adic
/// valuation of the coefficient plus the total `v`-degree.
pub fn i_adic_weight(x: &BpElement, p: Prime) -> Result<Valuation> {
    let mut best: Option<i64> = None;
    for (c, v, _) in x.terms() {
        let e = rational_valuation(c, p).expect("stored coefficients are nonzero");
        if e < 0 {
            return Err(CoreError::NonIntegral(format!("coefficient {c}")));
        }
        let w = e + v.iter().map(|&x| x as i64).sum::<i64>();
        best = Some(best.map_or(w, |b| b.min(w)));
    }
    Ok(match best {
        None => Valuation::Infinite,
        Some(w) => Valuation::Finite(w as u32),
    })
}

/// Degrees of the variables of a ring with `blocks` groups of `ngens`
/// generators each (`v`, then one or more groups of `t`'s).
pub fn variable_degrees(p: Prime, ngens: usize, blocks: usize) -> Vec<u32> {
    (0..blocks)
        .flat_map(|_| (1..=ngens as u32).map(move |n| p.generator_degree(n)))
        .collect()
}

fn to_integral(p: &Poly<BigRational>, what: &str) -> Result<Poly<BigInt>> {
    let mut out = Poly::zero(p.nvars());
    for (e, c) in p.terms() {
        if !c.is_integer() {
            return Err(CoreError::NonIntegral(format!("{what}: coefficient {c}")));
        }
        out.add_term(e.clone(), c.to_integer());
    }
    Ok(out)
}

fn to_rational(p: &Poly<BigInt>) -> Poly<BigRational> {
    p.map_coefficients(|c| BigRational::from_integer(c.clone()))
}

/// Structure constants of `(BP_*, BP_*BP)` through internal degree `t_max`.
#[derive(Clone, Debug)]
pub struct BpStructure {
    prime: Prime,
    t_max: u32,
    ngens: usize,
    /// `η_R(v_n)` in variables `(v, t)`.
    eta_v: Vec<Poly<BigInt>>,
    /// `Δ(t_n)` in variables `(v, t', t'')`, coefficients on the left.
    delta_t: Vec<Poly<BigInt>>,
}

impl BpStructure {
    pub fn new(prime: Prime, t_max: u32) -> Result<Self> {
        let ngens = prime.generators_below(t_max);
        let p_rat = BigRational::from_integer(prime.value().into());
        let inv_p = BigRational::one() / p_rat.clone();
        let deg2 = variable_degrees(prime, ngens, 2);
        let deg3 = variable_degrees(prime, ngens, 3);
        let cap = t_max;
        let pw = |i: usize| prime.pow(i as u32) as u32;

        // logarithm coefficients, as polynomials in v (2-block layout)
        let mut m: Vec<Poly<BigRational>> = vec![Poly::one(2 * ngens)];
        for n in 1..=ngens {
            let mut acc = Poly::zero(2 * ngens);
            for (i, mi) in m.iter().enumerate() {
                let v = Poly::var_power(2 * ngens, n - i - 1, pw(i));
                acc.add_assign(&mi.mul_truncated(&v, &deg2, cap));
            }
            m.push(acc.scale(&inv_p));
        }

        let t2 = |j: usize, e: u32| -> Poly<BigRational> {
            if j == 0 {
                Poly::one(2 * ngens)
            } else {
                Poly::var_power(2 * ngens, ngens + j - 1, e)
            }
        };
        let mut eta_m: Vec<Poly<BigRational>> = vec![Poly::one(2 * ngens)];
        for n in 1..=ngens {
            let mut acc = Poly::zero(2 * ngens);
            for (i, mi) in m.iter().enumerate().take(n + 1) {
                acc.add_assign(&mi.mul_truncated(&t2(n - i, pw(i)), &deg2, cap));
            }
            eta_m.push(acc);
        }
        let mut eta_v_rat: Vec<Poly<BigRational>> = Vec::new();
        for n in 1..=ngens {
            let mut acc = eta_m[n].scale(&p_rat);
            for i in 1..n {
                let power = eta_v_rat[n - i - 1].pow_truncated(pw(i), &deg2, cap);
                acc.sub_assign(&eta_m[i].mul_truncated(&power, &deg2, cap));
            }
            eta_v_rat.push(acc);
        }
        let eta_v = eta_v_rat
            .iter()
            .enumerate()
            .map(|(n, e)| to_integral(e, &format!("right unit of v{}", n + 1)))
            .collect::<Result<Vec<_>>>()?;

        // coproduct, 3-block layout
        let lift = |x: &Poly<BigRational>| -> Poly<BigRational> {
            let mut out = Poly::zero(3 * ngens);
            for (e, c) in x.terms() {
                let mut e3 = vec![0; 3 * ngens];
                e3[..ngens].copy_from_slice(&e[..ngens]);
                out.add_term(e3, c.clone());
            }
            out
        };
        let m3: Vec<_> = m.iter().map(lift).collect();
        let t3 = |block: usize, j: usize, e: u32| -> Poly<BigRational> {
            if j == 0 {
                Poly::one(3 * ngens)
            } else {
                Poly::var_power(3 * ngens, block * ngens + j - 1, e)
            }
        };
        let mut delta_rat: Vec<Poly<BigRational>> = vec![Poly::one(3 * ngens)];
        for n in 1..=ngens {
            let mut acc = Poly::zero(3 * ngens);
            for (i, mi) in m3.iter().enumerate().take(n + 1) {
                for j in 0..=n - i {
                    let k = n - i - j;
                    let term = mi
                        .mul_truncated(&t3(1, j, pw(i)), &deg3, cap)
                        .mul_truncated(&t3(2, k, pw(i + j)), &deg3, cap);
                    acc.add_assign(&term);
                }
            }
            for i in 1..=n {
                let power = delta_rat[n - i].pow_truncated(pw(i), &deg3, cap);
                acc.sub_assign(&m3[i].mul_truncated(&power, &deg3, cap));
            }
            delta_rat.push(acc);
        }
        let delta_t = delta_rat
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, d)| to_integral(d, &format!("coproduct of t{n}")))
            .collect::<Result<Vec<_>>>()?;

        Ok(BpStructure {
            prime,
            t_max,
            ngens,
            eta_v,
            delta_t,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    /// Number of generators `v_n` (equivalently `t_n`) of degree `≤ t_max`.
    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// `η_R(v_n)` with integer coefficients, variables `(v_1.., t_1..)`.
    pub fn eta_right_v(&self, n: usize) -> &Poly<BigInt> {
        &self.eta_v[n - 1]
    }

    /// `Δ(t_n)` with integer coefficients, variables `(v_1.., t'_1.., t''_1..)`.
    pub fn delta_t(&self, n: usize) -> &Poly<BigInt> {
        &self.delta_t[n - 1]
    }

    fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.t_max {
            return Err(CoreError::Truncation(format!(
                "degree {degree} is beyond the structure tables (t_max = {})",
                self.t_max
            )));
        }
        Ok(())
    }

    /// `η_R(v^E)` as an integer polynomial in `(v, t)`.
    pub fn eta_right_monomial(&self, v: &[u32]) -> Result<Poly<BigInt>> {
        let deg2 = variable_degrees(self.prime, self.ngens, 2);
        let mut e = vec![0; 2 * self.ngens];
        e[..v.len()].copy_from_slice(v);
        self.check_degree(weighted_degree(&e, &deg2))?;
        let mut out = Poly::one(2 * self.ngens);
        for (i, &x) in v.iter().enumerate() {
            if x > 0 {
                let pw = self.eta_v[i].pow_truncated(x, &deg2, self.t_max);
                out = out.mul_truncated(&pw, &deg2, self.t_max);
            }
        }
        Ok(out)
    }

    /// `Δ(t^R)` as an integer polynomial in `(v, t', t'')`.
    pub fn delta_monomial(&self, t: &[u32]) -> Result<Poly<BigInt>> {
        let deg3 = variable_degrees(self.prime, self.ngens, 3);
        let deg2 = variable_degrees(self.prime, self.ngens, 2);
        let mut e = vec![0; 2 * self.ngens];
        e[self.ngens..self.ngens + t.len()].copy_from_slice(t);
        self.check_degree(weighted_degree(&e, &deg2))?;
        let mut out = Poly::one(3 * self.ngens);
        for (i, &x) in t.iter().enumerate() {
            if x > 0 {
                let pw = self.delta_t[i].pow_truncated(x, &deg3, self.t_max);
                out = out.mul_truncated(&pw, &deg3, self.t_max);
            }
        }
        Ok(out)
    }

    /// The right unit on an element of `BP_*` (an element without `t`'s).
    pub fn eta_right(&self, x: &BpElement) -> Result<BpElement> {
        if x.ngens != self.ngens {
            return Err(CoreError::DegreeMismatch(format!(
                "element has {} generators, tables have {}",
                x.ngens, self.ngens
            )));
        }
        if x.has_t() {
            return Err(CoreError::DegreeMismatch("the right unit is defined on BP_* only".into()));
        }
        self.check_degree(x.degree_bound(self.prime))?;
        let mut out = Poly::zero(2 * self.ngens);
        for (c, v, _) in x.terms() {
            let image = to_rational(&self.eta_right_monomial(v)?);
            out.add_assign(&image.scale(c));
        }
        Ok(BpElement {
            ngens: self.ngens,
            poly: out,
        })
    }

    /// `Δ(t_n)` reduced modulo `I`: `(left exponents, right exponents, coefficient mod p)`.
    pub fn delta_t_mod_i(&self, n: usize) -> Vec<(Vec<u32>, Vec<u32>, u32)> {
        let g = self.ngens;
        let mut out = Vec::new();
        for (e, c) in self.delta_t[n - 1].terms() {
            if e[..g].iter().any(|&x| x > 0) {
                continue;
            }
            let r = self.prime.reduce((c % BigInt::from(self.prime.value())).to_i64().unwrap());
            if r != 0 {
                out.push((e[g..2 * g].to_vec(), e[2 * g..].to_vec(), r));
            }
        }
        out
    }
}

/// Integer polynomial terms as a sorted map, handy for comparisons in tests.
pub fn integer_terms(p: &Poly<BigInt>) -> BTreeMap<Vec<u32>, i64> {
    p.terms().map(|(e, c)| (e.clone(), c.to_i64().expect("small coefficient"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn right_unit_of_v1() {
        let bp = BpStructure::new(p3(), 8).unwrap();
        assert_eq!(bp.ngens(), 1);
        let r = bp.eta_right(&BpElement::v(1, 1)).unwrap();
        let expected = BpElement::v(1, 1).add(&BpElement::t(1, 1).scale(3));
        assert_eq!(r, expected);
        assert_eq!(bp.eta_right(&BpElement::integer(1, 1)).unwrap(), BpElement::integer(1, 1));
        assert_eq!(bp.eta_right(&BpElement::integer(1, 3)).unwrap(), BpElement::integer(1, 3));
    }

    #[test]
    fn coproduct_of_t1_is_primitive() {
        let bp = BpStructure::new(p3(), 8).unwrap();
        let terms = integer_terms(bp.delta_t(1));
        let expected: BTreeMap<Vec<u32>, i64> = [(vec![0, 1, 0], 1), (vec![0, 0, 1], 1)].into_iter().collect();
        assert_eq!(terms, expected);
    }

    #[test]
    fn truncation_is_reported() {
        let bp = BpStructure::new(p3(), 8).unwrap();
        let v1sq = BpElement::v(1, 1).mul(&BpElement::v(1, 1), p3());
        assert!(matches!(bp.eta_right(&v1sq.mul(&BpElement::v(1, 1), p3())), Err(CoreError::Truncation(_))));
    }

    #[test]
    fn weights() {
        let p = p3();
        let g = 2;
        let x = BpElement::v(g, 1).scale(9);
        assert_eq!(i_adic_weight(&x, p).unwrap(), Valuation::Finite(3));
        assert_eq!(i_adic_weight(&BpElement::t(g, 1), p).unwrap(), Valuation::Finite(0));
        let y = BpElement::t(g, 1).scale(3).add(&BpElement::v(g, 1).mul(&BpElement::t(g, 2), p));
        assert_eq!(i_adic_weight(&y, p).unwrap(), Valuation::Finite(1));
        assert_eq!(i_adic_weight(&BpElement::zero(g), p).unwrap(), Valuation::Infinite);
    }
}
