//! `P_* = BP_*BP / I = F_p[t_1, t_2, ...]` and the comodules `I^k / I^{k+1}`.
//!
//! The coproduct of `P_*` is read off from the Hazewinkel coproduct of
//! `BP_*BP` modulo `I`, and the coaction on `I^k/I^{k+1}` from the right unit
//! modulo `I^{k+1}`; neither is written down by hand.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::bp::BpStructure;
use super::steenrod::fill_poly;
use crate::error::{CoreError, Result};
use crate::prime::Prime;

/// `t^R = t_1^{r_1} t_2^{r_2} ...`, stored without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolynomialMonomial {
    exponents: Vec<u32>,
}

impl PolynomialMonomial {
    pub fn new(exponents: &[u32]) -> Self {
        let mut exponents = exponents.to_vec();
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        PolynomialMonomial { exponents }
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn t(n: u32, e: u32) -> Self {
        let mut x = vec![0; n as usize];
        x[n as usize - 1] = e;
        Self::new(&x)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self, p: Prime) -> u32 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(j, &r)| r * p.generator_degree(j as u32 + 1))
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.exponents.len().max(other.exponents.len());
        let e: Vec<u32> = (0..n)
            .map(|i| self.exponents.get(i).copied().unwrap_or(0) + other.exponents.get(i).copied().unwrap_or(0))
            .collect();
        Self::new(&e)
    }
}

impl fmt::Display for PolynomialMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(j, &r)| if r == 1 { format!("t{}", j + 1) } else { format!("t{}^{}", j + 1, r) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

type PolyTensor = HashMap<(PolynomialMonomial, PolynomialMonomial), u32>;

/// Monomials of `P_*` through `t_max` with their reduced coproducts, indexed
/// like [`super::steenrod::SteenrodAlgebra`].
#[derive(Clone, Debug)]
pub struct PolynomialAlgebra {
    prime: Prime,
    t_max: u32,
    monomials: Vec<PolynomialMonomial>,
    degrees: Vec<u32>,
    index: HashMap<PolynomialMonomial, u32>,
    degree_start: Vec<u32>,
    reduced: Vec<Vec<(u32, u32, u32)>>,
}

impl PolynomialAlgebra {
    pub fn new(bp: &BpStructure) -> Self {
        let p = bp.prime();
        let t_max = bp.t_max();
        let g = bp.ngens();
        let mut monomials = Vec::new();
        fill_poly(p, t_max, 0, &mut vec![0; g], &mut |r| monomials.push(PolynomialMonomial::new(r)));
        monomials.sort_by(|a, b| (a.degree(p), a).cmp(&(b.degree(p), b)));
        let degrees: Vec<u32> = monomials.iter().map(|m| m.degree(p)).collect();
        let index: HashMap<_, _> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut degree_start = vec![0u32; t_max as usize + 2];
        for d in 0..=t_max + 1 {
            degree_start[d as usize] = degrees.iter().take_while(|&&x| x < d).count() as u32;
        }
        let gens: Vec<PolyTensor> = (1..=g)
            .map(|n| {
                bp.delta_t_mod_i(n)
                    .into_iter()
                    .map(|(l, r, c)| ((PolynomialMonomial::new(&l), PolynomialMonomial::new(&r)), c))
                    .collect()
            })
            .collect();
        let reduced = monomials
            .iter()
            .map(|m| {
                let mut acc = PolyTensor::new();
                acc.insert((PolynomialMonomial::unit(), PolynomialMonomial::unit()), 1);
                for (j, &r) in m.exponents().iter().enumerate() {
                    for _ in 0..r {
                        acc = tensor_mul(p, &acc, &gens[j]);
                    }
                }
                let mut terms: Vec<(u32, u32, u32)> = acc
                    .into_iter()
                    .filter(|((l, r), _)| !l.is_unit() && !r.is_unit())
                    .map(|((l, r), c)| (index[&l], index[&r], c))
                    .collect();
                terms.sort_unstable();
                terms
            })
            .collect();
        PolynomialAlgebra {
            prime: p,
            t_max,
            monomials,
            degrees,
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

    pub fn monomial(&self, id: u32) -> &PolynomialMonomial {
        &self.monomials[id as usize]
    }

    pub fn id(&self, m: &PolynomialMonomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn degree(&self, id: u32) -> u32 {
        self.degrees[id as usize]
    }

    pub fn ids_of_degree(&self, d: u32) -> std::ops::Range<u32> {
        if d > self.t_max {
            return 0..0;
        }
        self.degree_start[d as usize]..self.degree_start[d as usize + 1]
    }

    pub fn reduced_coproduct(&self, id: u32) -> &[(u32, u32, u32)] {
        &self.reduced[id as usize]
    }

    /// Full coproduct of a monomial as `(left, right, coefficient)`.
    pub fn coproduct(&self, m: &PolynomialMonomial) -> Result<Vec<(PolynomialMonomial, PolynomialMonomial, u32)>> {
        let id = self.id(m).ok_or(CoreError::DegreeCap {
            degree: m.degree(self.prime),
            cap: self.t_max,
        })?;
        let mut out = vec![(PolynomialMonomial::unit(), m.clone(), 1)];
        if !m.is_unit() {
            out.push((m.clone(), PolynomialMonomial::unit(), 1));
        }
        out.extend(
            self.reduced[id as usize]
                .iter()
                .map(|&(l, r, c)| (self.monomial(l).clone(), self.monomial(r).clone(), c)),
        );
        out.sort();
        Ok(out)
    }
}

fn tensor_mul(p: Prime, a: &PolyTensor, b: &PolyTensor) -> PolyTensor {
    let mut out = PolyTensor::new();
    for ((l1, r1), c1) in a {
        for ((l2, r2), c2) in b {
            let e = out.entry((l1.mul(l2), r1.mul(r2))).or_insert(0);
            *e = p.add(*e, p.mul(*c1, *c2));
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// An `F_p`-combination of monomials `v_0^{e_0} v_1^{e_1} ...` spanning
/// `I^k / I^{k+1}`, where `v_0` stands for `p`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedVElement {
    terms: BTreeMap<Vec<u32>, u32>,
}

impl GradedVElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The monomial with exponents `(e_0, e_1, ...)`.
    pub fn monomial(exps: &[u32]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(trim(exps), 1);
        GradedVElement { terms }
    }

    pub fn add_term(&mut self, exps: &[u32], c: u32, p: Prime) {
        let key = trim(exps);
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e = p.add(*e, c % p.value());
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common weight `k`, or `None` for zero or inhomogeneous input.
    pub fn weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    pub fn degree(&self, p: Prime) -> Option<u32> {
        let mut ds = self.terms.keys().map(|e| v_monomial_degree(e, p));
        let d = ds.next()?;
        ds.all(|x| x == d).then_some(d)
    }
}

impl fmt::Display for GradedVElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let m = format_v_monomial(e);
                if c == 1 {
                    m
                } else {
                    format!("{c} {m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn trim(exps: &[u32]) -> Vec<u32> {
    let mut v = exps.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Internal degree of `v_0^{e_0} v_1^{e_1} ...` (`v_0` has degree 0).
pub fn v_monomial_degree(exps: &[u32], p: Prime) -> u32 {
    exps.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &e)| e * p.generator_degree(i as u32))
        .sum()
}

pub fn format_v_monomial(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("v{i}") } else { format!("v{i}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

/// `(v-exponents of c_J, exponents of J, coefficient)`.
pub type CoactionTerm = (Vec<u32>, Vec<u32>, u32);

/// Coaction `ψ(x) = Σ c_J ⊗ t^J` on a single monomial `x = v_0^{e_0} v^E` of
/// weight `k`, from `η_R(x)` modulo `I^{k+1}`. Entries are
/// `(v-exponents of c_J, exponents of J, coefficient)`, sorted.
pub fn gr_coaction_monomial(bp: &BpStructure, exps: &[u32]) -> Result<Vec<CoactionTerm>> {
    let p = bp.prime();
    let g = bp.ngens();
    let e0 = exps.first().copied().unwrap_or(0);
    let rest: Vec<u32> = (1..=g).map(|i| exps.get(i).copied().unwrap_or(0)).collect();
    if exps.len() > g + 1 && exps[g + 1..].iter().any(|&x| x > 0) {
        return Err(CoreError::Truncation(format!(
            "{} involves generators beyond the structure tables",
            format_v_monomial(exps)
        )));
    }
    let k: u32 = exps.iter().sum();
    let image = bp.eta_right_monomial(&rest)?;
    let pb = BigInt::from(p.value());
    let mut acc: BTreeMap<(Vec<u32>, Vec<u32>), u32> = BTreeMap::new();
    for (e, c) in image.terms() {
        let mut c = c.clone();
        let mut val = e0;
        while (&c % &pb).is_zero() {
            c /= &pb;
            val += 1;
        }
        let w = val + e[..g].iter().sum::<u32>();
        if w < k {
            return Err(CoreError::Filtration(format!(
                "right unit of {} has a term of weight {w} < {k}",
                format_v_monomial(exps)
            )));
        }
        if w > k {
            continue;
        }
        let unit = p.reduce((c % &pb).to_i64().unwrap());
        let mut v = vec![val];
        v.extend_from_slice(&e[..g]);
        let key = (trim(&v), trim(&e[g..]));
        let slot = acc.entry(key).or_insert(0);
        *slot = p.add(*slot, unit);
    }
    Ok(acc.into_iter().filter(|(_, c)| *c != 0).map(|((v, t), c)| (v, t, c)).collect())
}

/// `ψ(x) ∈ (I^k/I^{k+1}) ⊗ P_*`, grouped by the `P_*` monomial.
pub fn gr_coaction(bp: &BpStructure, x: &GradedVElement) -> Result<Vec<(GradedVElement, PolynomialMonomial)>> {
    let p = bp.prime();
    let mut acc: BTreeMap<PolynomialMonomial, GradedVElement> = BTreeMap::new();
    for (e, c) in x.terms() {
        for (v, t, d) in gr_coaction_monomial(bp, e)? {
            acc.entry(PolynomialMonomial::new(&t))
                .or_default()
                .add_term(&v, p.mul(c, d), p);
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| (v, t))
        .collect())
}
