//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! Used only for building structure constants of `BP_*BP`, where coefficients
//! are p-local rationals during the recursion and integers afterwards.

use num_traits::Num;
use std::collections::BTreeMap;

/// Exponent vector; its length is the number of variables of the ambient ring.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Num + Clone> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut out = Self::zero(nvars);
        out.add_term(vec![0; nvars], c);
        out
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    /// The monomial `x_var^exp`.
    pub fn var_power(nvars: usize, var: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        let mut out = Self::zero(nvars);
        out.add_term(e, C::one());
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, C> {
        self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: C) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), C::zero() - c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    /// Product, discarding monomials whose weighted degree exceeds `cap`.
    pub fn mul_truncated(&self, other: &Self, degrees: &[u32], cap: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            let d1 = weighted_degree(e1, degrees);
            if d1 > cap {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1 + weighted_degree(e2, degrees) > cap {
                    continue;
                }
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow_truncated(&self, n: u32, degrees: &[u32], cap: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_truncated(&base, degrees, cap);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_truncated(&base, degrees, cap);
            }
        }
        result
    }

    pub fn map_coefficients<D: Num + Clone>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Substitutes the variables; `images[i]` replaces variable `i` and lives in
    /// a ring with `target_nvars` variables.
    pub fn substitute(&self, images: &[Poly<C>], target_nvars: usize, degrees: &[u32], cap: u32) -> Poly<C> {
        let mut out = Poly::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (var, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    let pw = images[var].pow_truncated(exp, degrees, cap);
                    term = term.mul_truncated(&pw, degrees, cap);
                }
            }
            out.add_assign(&term);
        }
        out
    }
}

pub fn weighted_degree(e: &[u32], degrees: &[u32]) -> u32 {
    e.iter().zip(degrees).map(|(a, d)| a * d).sum()
}
