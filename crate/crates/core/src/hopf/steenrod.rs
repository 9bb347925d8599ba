//! The dual Steenrod algebra `A_* = F_p[t_1, t_2, ...] ⊗ E[τ_0, τ_1, ...]`.
//!
//! The polynomial generators are the Milnor elements, written `t_i` to match
//! the notation of `P_*`. The coproduct is
//!
//! ```text
//! Δ t_n = Σ_{i=0}^{n} t_{n-i}^{p^i} ⊗ t_i
//! Δ τ_n = τ_n ⊗ 1 + Σ_{i=0}^{n} t_{n-i}^{p^i} ⊗ τ_i
//! ```
//!
//! extended multiplicatively with Koszul signs (`τ_i` odd, `t_i` even).

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{CoreError, Result};
use crate::prime::Prime;

/// `τ_E t^R`: the exterior part is a bit set of indices, the polynomial part
/// an exponent sequence without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SteenrodMonomial {
    exterior: u32,
    poly: Vec<u32>,
}

impl SteenrodMonomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn new(exterior: &[u32], poly: &[u32]) -> Self {
        let mut mask = 0u32;
        for &i in exterior {
            assert!(i < 32 && mask & (1 << i) == 0, "repeated exterior index {i}");
            mask |= 1 << i;
        }
        Self::from_parts(mask, poly.to_vec())
    }

    fn from_parts(exterior: u32, mut poly: Vec<u32>) -> Self {
        while poly.last() == Some(&0) {
            poly.pop();
        }
        SteenrodMonomial { exterior, poly }
    }

    /// `τ_i`.
    pub fn tau(i: u32) -> Self {
        Self::from_parts(1 << i, Vec::new())
    }

    /// `t_i^e` for `i ≥ 1`; `t_0 = 1`.
    pub fn t_power(i: u32, e: u32) -> Self {
        if i == 0 || e == 0 {
            return Self::unit();
        }
        let mut poly = vec![0; i as usize];
        poly[i as usize - 1] = e;
        Self::from_parts(0, poly)
    }

    pub fn exterior_mask(&self) -> u32 {
        self.exterior
    }

    pub fn exterior(&self) -> Vec<u32> {
        (0..32).filter(|i| self.exterior & (1 << i) != 0).collect()
    }

    /// Exponents `(r_1, r_2, ...)`.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn is_unit(&self) -> bool {
        self.exterior == 0 && self.poly.is_empty()
    }

    /// Number of exterior factors.
    pub fn tau_count(&self) -> u32 {
        self.exterior.count_ones()
    }

    pub fn degree(&self, p: Prime) -> u32 {
        let ext: u32 = self.exterior().into_iter().map(|i| p.exterior_degree(i)).sum();
        let pol: u32 = self
            .poly
            .iter()
            .enumerate()
            .map(|(j, &r)| r * p.generator_degree(j as u32 + 1))
            .sum();
        ext + pol
    }

    /// Motivic weight: `p^i - 1` for each `τ_i` and each `t_i`.
    pub fn weight(&self, p: Prime) -> u32 {
        let ext: u32 = self.exterior().into_iter().map(|i| (p.pow(i) - 1) as u32).sum();
        let pol: u32 = self
            .poly
            .iter()
            .enumerate()
            .map(|(j, &r)| r * (p.pow(j as u32 + 1) - 1) as u32)
            .sum();
        ext + pol
    }

    /// Product in `A_*`: `None` when an exterior generator repeats, otherwise
    /// the sign (`true` for `-1`) and the product monomial.
    pub fn mul(&self, other: &Self) -> Option<(bool, Self)> {
        if self.exterior & other.exterior != 0 {
            return None;
        }
        // moving each τ of `other` past the larger τ's of `self`
        let mut swaps = 0;
        for j in 0..32 {
            if other.exterior & (1 << j) != 0 {
                swaps += (self.exterior >> (j + 1)).count_ones();
            }
        }
        let n = self.poly.len().max(other.poly.len());
        let poly = (0..n)
            .map(|i| self.poly.get(i).copied().unwrap_or(0) + other.poly.get(i).copied().unwrap_or(0))
            .collect();
        Some((swaps % 2 == 1, Self::from_parts(self.exterior | other.exterior, poly)))
    }

    fn order_key(&self) -> (Vec<u32>, &[u32]) {
        (self.exterior(), &self.poly)
    }
}

impl PartialOrd for SteenrodMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exterior-set lexicographic, then exponent-lexicographic. Callers that need
/// the full monomial order compare degrees first.
impl Ord for SteenrodMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ea, pa) = self.order_key();
        let (eb, pb) = other.order_key();
        ea.cmp(&eb).then_with(|| {
            let n = pa.len().max(pb.len());
            (0..n)
                .map(|i| pa.get(i).copied().unwrap_or(0))
                .cmp((0..n).map(|i| pb.get(i).copied().unwrap_or(0)))
        })
    }
}

impl fmt::Display for SteenrodMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for i in self.exterior() {
            parts.push(format!("τ{i}"));
        }
        for (j, &r) in self.poly.iter().enumerate() {
            match r {
                0 => {}
                1 => parts.push(format!("t{}", j + 1)),
                _ => parts.push(format!("t{}^{}", j + 1, r)),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// An element of `A_* ⊗ A_*` as a map from monomial pairs to residues.
pub type TensorSum = HashMap<(SteenrodMonomial, SteenrodMonomial), u32>;

fn tensor_mul(p: Prime, a: &TensorSum, b: &TensorSum) -> TensorSum {
    let mut out = TensorSum::new();
    for ((l1, r1), c1) in a {
        for ((l2, r2), c2) in b {
            let Some((s1, l)) = l1.mul(l2) else { continue };
            let Some((s2, r)) = r1.mul(r2) else { continue };
            // (a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd
            let koszul = r1.tau_count() % 2 == 1 && l2.tau_count() % 2 == 1;
            let negative = s1 ^ s2 ^ koszul;
            let mut c = p.mul(*c1, *c2);
            if negative {
                c = p.neg(c);
            }
            let e = out.entry((l, r)).or_insert(0);
            *e = p.add(*e, c);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn generator_coproduct(p: Prime, exterior: Option<u32>, n: u32) -> TensorSum {
    let mut out = TensorSum::new();
    match exterior {
        Some(n) => {
            out.insert((SteenrodMonomial::tau(n), SteenrodMonomial::unit()), 1);
            for i in 0..=n {
                let left = SteenrodMonomial::t_power(n - i, p.pow(i) as u32);
                out.insert((left, SteenrodMonomial::tau(i)), 1);
            }
        }
        None => {
            for i in 0..=n {
                let left = SteenrodMonomial::t_power(n - i, p.pow(i) as u32);
                let right = SteenrodMonomial::t_power(i, 1);
                *out.entry((left, right)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// The full Milnor coproduct of a monomial, as `(left, right, coefficient)`
/// triples sorted by `(left, right)`.
pub fn coproduct(m: &SteenrodMonomial, p: Prime, degree_cap: u32) -> Result<Vec<(SteenrodMonomial, SteenrodMonomial, u32)>> {
    let degree = m.degree(p);
    if degree > degree_cap {
        return Err(CoreError::DegreeCap { degree, cap: degree_cap });
    }
    let mut acc = TensorSum::new();
    acc.insert((SteenrodMonomial::unit(), SteenrodMonomial::unit()), 1);
    for i in m.exterior() {
        acc = tensor_mul(p, &acc, &generator_coproduct(p, Some(i), i));
    }
    for (j, &r) in m.poly().iter().enumerate() {
        let g = generator_coproduct(p, None, j as u32 + 1);
        for _ in 0..r {
            acc = tensor_mul(p, &acc, &g);
        }
    }
    let mut out: Vec<_> = acc.into_iter().map(|((l, r), c)| (l, r, c)).collect();
    out.sort_by(|a, b| (a.0.degree(p), &a.0, &a.1).cmp(&(b.0.degree(p), &b.0, &b.1)));
    Ok(out)
}

/// All monomials of `A_*` of degree `≤ t_max`, sorted by degree and then by the
/// monomial order, with their reduced coproducts.
#[derive(Clone, Debug)]
pub struct SteenrodAlgebra {
    prime: Prime,
    t_max: u32,
    monomials: Vec<SteenrodMonomial>,
    degrees: Vec<u32>,
    tau_counts: Vec<u32>,
    index: HashMap<SteenrodMonomial, u32>,
    degree_start: Vec<u32>,
    reduced: Vec<Vec<(u32, u32, u32)>>,
}

impl SteenrodAlgebra {
    pub fn new(prime: Prime, t_max: u32) -> Self {
        let mut monomials = enumerate_monomials(prime, t_max);
        monomials.sort_by(|a, b| (a.degree(prime), a).cmp(&(b.degree(prime), b)));
        let degrees: Vec<u32> = monomials.iter().map(|m| m.degree(prime)).collect();
        let tau_counts = monomials.iter().map(|m| m.tau_count()).collect();
        let index: HashMap<_, _> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut degree_start = vec![0u32; t_max as usize + 2];
        for d in 0..=t_max + 1 {
            degree_start[d as usize] = degrees.iter().take_while(|&&x| x < d).count() as u32;
        }
        let reduced = monomials
            .iter()
            .map(|m| {
                coproduct(m, prime, t_max)
                    .expect("monomial is within the cap")
                    .into_iter()
                    .filter(|(l, r, _)| !l.is_unit() && !r.is_unit())
                    .map(|(l, r, c)| (index[&l], index[&r], c))
                    .collect()
            })
            .collect();
        SteenrodAlgebra {
            prime,
            t_max,
            monomials,
            degrees,
            tau_counts,
            index,
            degree_start,
            reduced,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, id: u32) -> &SteenrodMonomial {
        &self.monomials[id as usize]
    }

    pub fn id(&self, m: &SteenrodMonomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn degree(&self, id: u32) -> u32 {
        self.degrees[id as usize]
    }

    pub fn tau_count(&self, id: u32) -> u32 {
        self.tau_counts[id as usize]
    }

    /// Ids of the monomials of degree exactly `d`.
    pub fn ids_of_degree(&self, d: u32) -> std::ops::Range<u32> {
        if d > self.t_max {
            return 0..0;
        }
        self.degree_start[d as usize]..self.degree_start[d as usize + 1]
    }

    /// Reduced coproduct `Δ̄(m) = Δ(m) - m ⊗ 1 - 1 ⊗ m` as id triples.
    pub fn reduced_coproduct(&self, id: u32) -> &[(u32, u32, u32)] {
        &self.reduced[id as usize]
    }
}

fn enumerate_monomials(p: Prime, t_max: u32) -> Vec<SteenrodMonomial> {
    let taus: Vec<u32> = (0..).take_while(|&i| p.exterior_degree(i) <= t_max).collect();
    let ts = p.generators_below(t_max);
    let mut out = Vec::new();
    for mask in 0u32..(1 << taus.len()) {
        let base = SteenrodMonomial::from_parts(mask, Vec::new());
        let d = base.degree(p);
        if d > t_max {
            continue;
        }
        let mut poly = vec![0u32; ts];
        fill_poly(p, t_max - d, 0, &mut poly, &mut |r| {
            out.push(SteenrodMonomial::from_parts(mask, r.to_vec()));
        });
    }
    out
}

/// Calls `emit` for every exponent vector of weighted degree `≤ budget`.
pub(crate) fn fill_poly(p: Prime, budget: u32, j: usize, poly: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if j == poly.len() {
        emit(poly);
        return;
    }
    let d = p.generator_degree(j as u32 + 1);
    let mut r = 0;
    while r * d <= budget {
        poly[j] = r;
        fill_poly(p, budget - r * d, j + 1, poly, emit);
        r += 1;
    }
    poly[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn low_coproducts() {
        let p = p3();
        let one = SteenrodMonomial::unit();
        let tau0 = SteenrodMonomial::tau(0);
        let t1 = SteenrodMonomial::t_power(1, 1);
        assert_eq!(
            coproduct(&tau0, p, 10).unwrap(),
            vec![(one.clone(), tau0.clone(), 1), (tau0.clone(), one.clone(), 1)]
        );
        assert_eq!(
            coproduct(&t1, p, 10).unwrap(),
            vec![(one.clone(), t1.clone(), 1), (t1.clone(), one.clone(), 1)]
        );
        let t1sq = SteenrodMonomial::t_power(1, 2);
        assert_eq!(
            coproduct(&t1sq, p, 10).unwrap(),
            vec![(one.clone(), t1sq.clone(), 1), (t1.clone(), t1.clone(), 2), (t1sq.clone(), one, 1)]
        );
        assert!(matches!(coproduct(&t1sq, p, 7), Err(CoreError::DegreeCap { .. })));
    }

    #[test]
    fn exterior_signs() {
        let a = SteenrodMonomial::tau(1);
        let b = SteenrodMonomial::tau(0);
        let (neg, m) = a.mul(&b).unwrap();
        assert!(neg);
        assert_eq!(m, SteenrodMonomial::new(&[0, 1], &[]));
        assert!(a.mul(&a).is_none());
    }

    #[test]
    fn monomial_counts_at_three() {
        let alg = SteenrodAlgebra::new(p3(), 27);
        let counts: Vec<usize> = (0..=27).map(|d| alg.ids_of_degree(d).len()).collect();
        assert_eq!(
            counts,
            vec![1, 1, 0, 0, 1, 2, 1, 0, 1, 2, 1, 0, 1, 2, 1, 0, 2, 4, 2, 0, 2, 5, 4, 1, 2, 5, 4, 1]
        );
    }

    #[test]
    fn degrees_and_weights() {
        let p = p3();
        assert_eq!(SteenrodMonomial::t_power(1, 1).degree(p), 4);
        assert_eq!(SteenrodMonomial::t_power(1, 1).weight(p), 2);
        assert_eq!(SteenrodMonomial::tau(0).degree(p), 1);
        assert_eq!(SteenrodMonomial::tau(0).weight(p), 0);
        assert_eq!(SteenrodMonomial::tau(1).degree(p), 5);
        assert_eq!(SteenrodMonomial::tau(1).weight(p), 2);
    }
}
