//! The cobar complex of `BP_*BP` with `BP_*` coefficients, computed modulo
//! `p^N` and filtered by powers of `I = (p, v_1, v_2, ...)`.
//!
//! Basis words are `v^E[γ_1|...|γ_s]` with `γ_i` positive-degree monomials in
//! the `t_i`. Coefficients are always written on the far left: a coefficient
//! `a` produced at slot `i` by `Δ` moves one slot left via
//!
//! ```text
//! [..|γ|a·..|..] = Σ_J [..|γ t^J|..] with a replaced by b_J,   η_R(a) = Σ b_J t^J
//! ```
//!
//! and is absorbed into `v^E` once it reaches the front.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::complex::{letters_of_degree, CobarComplex, ComplexTag};
use crate::error::{CoreError, Result};
use crate::hopf::bp::BpStructure;
use crate::hopf::polynomial::{PolynomialAlgebra, PolynomialMonomial};
use crate::linalg::{Modulus, Payload, SparseVector, Valuation};
use crate::prime::Prime;

/// A cochain with coefficients in `Z/p^N`: sorted indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralChain {
    modulus: Modulus,
    entries: Vec<(u32, u64)>,
}

impl IntegralChain {
    pub fn zero(modulus: Modulus) -> Self {
        IntegralChain {
            modulus,
            entries: Vec::new(),
        }
    }

    pub fn unit(modulus: Modulus, index: u32) -> Self {
        IntegralChain {
            modulus,
            entries: vec![(index, 1 % modulus.value())],
        }
    }

    pub fn from_map(modulus: Modulus, map: HashMap<u32, u64>) -> Self {
        let mut entries: Vec<(u32, u64)> = map.into_iter().filter(|&(_, c)| c % modulus.value() != 0).collect();
        entries.sort_unstable();
        IntegralChain { modulus, entries }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u32, u64)] {
        &self.entries
    }

    /// `self += c * other`.
    pub fn add_scaled_integer(&mut self, other: &Self, c: u64) {
        let m = self.modulus;
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            let (idx, v) = match (a, b) {
                (Some(&(ia, va)), Some(&(ib, vb))) if ia == ib => {
                    i += 1;
                    j += 1;
                    (ia, m.add(va, m.mul(c, vb)))
                }
                (Some(&(ia, va)), Some(&(ib, _))) if ia < ib => {
                    i += 1;
                    (ia, va)
                }
                (Some(&(ia, va)), None) => {
                    i += 1;
                    (ia, va)
                }
                (_, Some(&(ib, vb))) => {
                    j += 1;
                    (ib, m.mul(c, vb))
                }
                (None, None) => unreachable!(),
            };
            if v != 0 {
                out.push((idx, v));
            }
        }
        self.entries = out;
    }
}

impl Payload for IntegralChain {
    fn zero_like(&self) -> Self {
        IntegralChain::zero(self.modulus)
    }
    fn add_scaled(&mut self, other: &Self, c: u32, _p: Prime) {
        self.add_scaled_integer(other, c as u64)
    }
}

/// One bidegree of the integral complex.
#[derive(Clone, Debug)]
pub struct IntegralSlice {
    pub s: u32,
    pub t: u32,
    /// Each word is `[v-monomial, letter_1, ..., letter_s]`.
    pub basis: Vec<Vec<u32>>,
    pub differential: Vec<IntegralChain>,
}

/// `(coefficient mod p^N, v-monomial, letter)`.
type EtaTerm = (u64, u32, u32);
/// `(left letter, right letter, coefficient polynomial as (v-monomial, coefficient))`.
type DeltaTerm = (u32, u32, Vec<(u32, u64)>);

pub struct IntegralComplex {
    bp: Arc<BpStructure>,
    alg: Arc<PolynomialAlgebra>,
    modulus: Modulus,
    s_max: u32,
    t_max: u32,
    vmonos: Vec<Vec<u32>>,
    vdegrees: Vec<u32>,
    vindex: HashMap<Vec<u32>, u32>,
    eta: Vec<Vec<EtaTerm>>,
    delta: Vec<Vec<DeltaTerm>>,
    slices: HashMap<(u32, u32), IntegralSlice>,
    lookups: HashMap<(u32, u32), HashMap<Vec<u32>, u32>>,
}

fn trim(e: &[u32]) -> Vec<u32> {
    let mut e = e.to_vec();
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn reduce_bigint(c: &BigInt, m: Modulus) -> u64 {
    let mb = BigInt::from(m.value());
    let mut r = c % &mb;
    if r < BigInt::zero() {
        r += &mb;
    }
    r.to_u64().expect("residue fits in u64")
}

impl IntegralComplex {
    pub fn build(bp: Arc<BpStructure>, alg: Arc<PolynomialAlgebra>, modulus: Modulus, s_max: u32, t_max: u32) -> Result<Self> {
        let p = bp.prime();
        if modulus.prime() != p {
            return Err(CoreError::DegreeMismatch(format!(
                "modulus is a power of {}, structure is at p = {p}",
                modulus.prime()
            )));
        }
        if t_max > bp.t_max() || t_max > alg.t_max() {
            return Err(CoreError::Truncation(format!(
                "integral complex needs degrees up to {t_max}, structure tables stop at {}",
                bp.t_max().min(alg.t_max())
            )));
        }
        let g = bp.ngens();
        let mut vmonos = Vec::new();
        v_monomials(p, t_max, 0, &mut vec![0; g], &mut vmonos);
        let vdeg = |e: &[u32]| e.iter().enumerate().map(|(i, &x)| x * p.generator_degree(i as u32 + 1)).sum::<u32>();
        vmonos.sort_by_cached_key(|e| (vdeg(e), e.clone()));
        let vdegrees: Vec<u32> = vmonos.iter().map(|e| vdeg(e)).collect();
        let vindex: HashMap<Vec<u32>, u32> = vmonos.iter().cloned().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let letter = |t: &[u32]| -> Result<u32> {
            alg.id(&PolynomialMonomial::new(t))
                .ok_or_else(|| CoreError::Truncation(format!("letter t^{t:?} beyond the structure tables")))
        };
        let vid = |e: &[u32]| -> Result<u32> {
            vindex
                .get(&trim(e))
                .copied()
                .ok_or_else(|| CoreError::Truncation(format!("v-monomial {e:?} beyond the structure tables")))
        };

        let mut eta = Vec::with_capacity(vmonos.len());
        for e in &vmonos {
            let mut terms = Vec::new();
            for (x, c) in bp.eta_right_monomial(e)?.terms() {
                let c = reduce_bigint(c, modulus);
                if c != 0 {
                    terms.push((c, vid(&x[..g])?, letter(&x[g..])?));
                }
            }
            terms.sort_unstable();
            eta.push(terms);
        }

        let unit = letter(&[])?;
        let mut delta = Vec::with_capacity(alg.len());
        for id in 0..alg.len() as u32 {
            let m = alg.monomial(id);
            let mut grouped: HashMap<(u32, u32), HashMap<u32, u64>> = HashMap::new();
            for (x, c) in bp.delta_monomial(m.exponents())?.terms() {
                let c = reduce_bigint(c, modulus);
                if c == 0 {
                    continue;
                }
                let key = (letter(&x[g..2 * g])?, letter(&x[2 * g..])?);
                let e = grouped.entry(key).or_default().entry(vid(&x[..g])?).or_insert(0);
                *e = modulus.add(*e, c);
            }
            let mut terms = Vec::new();
            for ((l, r), coef) in grouped {
                let mut coef: Vec<(u32, u64)> = coef.into_iter().filter(|&(_, c)| c != 0).collect();
                coef.sort_unstable();
                if coef.is_empty() {
                    continue;
                }
                if l == unit || r == unit {
                    let primitive = (l == unit && r == id) || (r == unit && l == id);
                    if !primitive || coef != [(0, 1 % modulus.value())] {
                        return Err(CoreError::InconsistentComplex(format!(
                            "coproduct of {m} has an unexpected term with a unit factor"
                        )));
                    }
                    continue;
                }
                terms.push((l, r, coef));
            }
            terms.sort_unstable();
            delta.push(terms);
        }

        let mut complex = IntegralComplex {
            bp,
            alg,
            modulus,
            s_max,
            t_max,
            vmonos,
            vdegrees,
            vindex,
            eta,
            delta,
            slices: HashMap::new(),
            lookups: HashMap::new(),
        };
        for t in 0..=t_max {
            for s in 0..=s_max + 1 {
                let basis = complex.enumerate(s, t);
                let lookup = basis.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
                complex.lookups.insert((s, t), lookup);
                complex.slices.insert(
                    (s, t),
                    IntegralSlice {
                        s,
                        t,
                        basis,
                        differential: Vec::new(),
                    },
                );
            }
        }
        for t in 0..=t_max {
            for s in 0..=s_max {
                let basis = &complex.slices[&(s, t)].basis;
                let differential = basis
                    .iter()
                    .map(|w| complex.apply_d(s, t, w))
                    .collect::<Result<Vec<_>>>()?;
                complex.slices.get_mut(&(s, t)).unwrap().differential = differential;
            }
        }
        Ok(complex)
    }

    fn enumerate(&self, s: u32, t: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for (v, &dv) in self.vdegrees.iter().enumerate() {
            if dv > t {
                break;
            }
            let mut word = vec![v as u32];
            letters_of_degree(self.alg.as_ref(), s, t - dv, &mut word, &mut out);
        }
        out
    }

    pub fn prime(&self) -> Prime {
        self.modulus.prime()
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn precision(&self) -> u32 {
        self.modulus.precision()
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn bp(&self) -> &BpStructure {
        &self.bp
    }

    pub fn slice(&self, s: u32, t: u32) -> Result<&IntegralSlice> {
        self.slices
            .get(&(s, t))
            .ok_or_else(|| CoreError::OutOfRange(format!("bp ({s},{t})")))
    }

    pub fn dim(&self, s: u32, t: u32) -> usize {
        self.slices.get(&(s, t)).map_or(0, |x| x.basis.len())
    }

    pub fn index_of(&self, s: u32, t: u32, word: &[u32]) -> Option<u32> {
        self.lookups.get(&(s, t))?.get(word).copied()
    }

    fn vmul(&self, a: u32, b: u32) -> Option<u32> {
        if a == 0 {
            return Some(b);
        }
        if b == 0 {
            return Some(a);
        }
        let x = &self.vmonos[a as usize];
        let y = &self.vmonos[b as usize];
        let mut e = vec![0; x.len().max(y.len())];
        for (i, v) in x.iter().enumerate() {
            e[i] += v;
        }
        for (i, v) in y.iter().enumerate() {
            e[i] += v;
        }
        self.vindex.get(&e).copied()
    }

    fn lmul(&self, a: u32, b: u32) -> Option<u32> {
        self.alg.id(&self.alg.monomial(a).mul(self.alg.monomial(b)))
    }

    fn apply_d(&self, s: u32, t: u32, word: &[u32]) -> Result<IntegralChain> {
        let m = self.modulus;
        let lost = || CoreError::Truncation(format!("differential of bp ({s},{t}) leaves the structure tables"));
        let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
        let mut add = |w: Vec<u32>, c: u64| {
            let e = acc.entry(w).or_insert(0);
            *e = m.add(*e, c);
        };
        let (v, letters) = (word[0], &word[1..]);
        for &(c, f, j) in &self.eta[v as usize] {
            if self.alg.monomial(j).is_unit() {
                continue;
            }
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(f);
            w.push(j);
            w.extend_from_slice(letters);
            add(w, c);
        }
        for i in 0..letters.len() {
            let sign_neg = i % 2 == 0;
            for (l, r, coef) in &self.delta[letters[i] as usize] {
                let mut base = Vec::with_capacity(letters.len() + 1);
                base.extend_from_slice(&letters[..i]);
                base.push(*l);
                base.push(*r);
                base.extend_from_slice(&letters[i + 1..]);
                // coefficients waiting to move left past position `pos`
                let mut pending: Vec<(u64, u32, Vec<u32>)> =
                    coef.iter().map(|&(f, c)| (if sign_neg { m.neg(c) } else { c }, f, base.clone())).collect();
                for pos in (0..i).rev() {
                    let mut next = Vec::new();
                    for (c, f, w) in pending {
                        if f == 0 {
                            next.push((c, f, w));
                            continue;
                        }
                        for &(b, f2, j) in &self.eta[f as usize] {
                            let mut w2 = w.clone();
                            w2[pos] = self.lmul(w2[pos], j).ok_or_else(lost)?;
                            next.push((m.mul(c, b), f2, w2));
                        }
                    }
                    pending = next;
                }
                for (c, f, w) in pending {
                    let mut full = Vec::with_capacity(w.len() + 1);
                    full.push(self.vmul(v, f).ok_or_else(lost)?);
                    full.extend(w);
                    add(full, c);
                }
            }
        }
        let mut map = HashMap::new();
        for (w, c) in acc {
            if c == 0 {
                continue;
            }
            let idx = self.index_of(s + 1, t, &w).ok_or_else(lost)?;
            map.insert(idx, c);
        }
        Ok(IntegralChain::from_map(m, map))
    }

    /// The differential of a cochain in slice `(s, t)`.
    pub fn d(&self, s: u32, t: u32, x: &IntegralChain) -> Result<IntegralChain> {
        if s > self.s_max {
            return Err(CoreError::OutOfRange(format!("bp differential out of ({s},{t})")));
        }
        let slice = self.slice(s, t)?;
        let mut out = IntegralChain::zero(self.modulus);
        for &(i, c) in &x.entries {
            out.add_scaled_integer(&slice.differential[i as usize], c);
        }
        Ok(out)
    }

    /// Verifies `d² = 0` on every basis word of slice `(s, t)`.
    pub fn check_d_squared(&self, s: u32, t: u32) -> Result<()> {
        for i in 0..self.dim(s, t) {
            let x = IntegralChain::unit(self.modulus, i as u32);
            let dd = self.d(s + 1, t, &self.d(s, t, &x)?)?;
            if !dd.is_zero() {
                return Err(CoreError::InconsistentComplex(format!(
                    "bp ({s},{t}): d² of {} is nonzero",
                    self.word_name(&self.slice(s, t)?.basis[i])
                )));
            }
        }
        Ok(())
    }

    /// Number of `v_i` factors in a v-monomial.
    fn v_count(&self, v: u32) -> u32 {
        self.vmonos[v as usize].iter().sum()
    }

    /// `I`-adic weight of `c·v^E[...]`: `v_p(c) + |E|`.
    pub fn term_weight(&self, word: &[u32], c: u64) -> Valuation {
        match self.modulus.valuation(c) {
            Valuation::Finite(e) => Valuation::Finite(e + self.v_count(word[0])),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Largest `w` with `x ∈ F^w`, as far as the precision can tell.
    pub fn filtration(&self, s: u32, t: u32, x: &IntegralChain) -> Result<Valuation> {
        let basis = &self.slice(s, t)?.basis;
        Ok(x.entries
            .iter()
            .map(|&(i, c)| self.term_weight(&basis[i as usize], c))
            .min()
            .unwrap_or(Valuation::Infinite))
    }

    fn check_weight(&self, w: u32) -> Result<()> {
        if w >= self.precision() {
            return Err(CoreError::Precision {
                precision: self.precision(),
                context: format!("weight {w} is not resolved modulo p^{}", self.precision()),
            });
        }
        Ok(())
    }

    /// The image of `x ∈ F^w` in `F^w/F^{w+1}`, as a cochain of the graded
    /// complex of weight `w`.
    pub fn gr(&self, s: u32, t: u32, x: &IntegralChain, w: u32, graded: &CobarComplex) -> Result<SparseVector> {
        self.check_weight(w)?;
        if graded.tag() != ComplexTag::AlgNov(w) {
            return Err(CoreError::DegreeMismatch(format!("gr in weight {w} needs algnov-k{w}, got {}", graded.tag())));
        }
        let p = self.prime();
        let basis = &self.slice(s, t)?.basis;
        let mut out = Vec::new();
        for &(i, c) in &x.entries {
            let word = &basis[i as usize];
            let (e, u) = self.modulus.split(c).expect("stored entries are nonzero");
            let weight = e + self.v_count(word[0]);
            if weight < w {
                return Err(CoreError::Filtration(format!(
                    "bp ({s},{t}): term {} {} has weight {weight} < {w}",
                    c,
                    self.word_name(word)
                )));
            }
            if weight > w {
                continue;
            }
            let mut exps = vec![e];
            exps.extend_from_slice(&self.vmonos[word[0] as usize]);
            let cid = graded.coefficients().id(&exps).ok_or_else(|| {
                CoreError::Truncation(format!("coefficient v^{exps:?} missing from algnov-k{w}"))
            })?;
            let mut gword = vec![cid];
            gword.extend_from_slice(&word[1..]);
            let idx = graded
                .index_of(s, t, &gword)
                .ok_or_else(|| CoreError::OutOfRange(format!("algnov-k{w} ({s},{t})")))?;
            out.push((idx, u as i64));
        }
        Ok(SparseVector::from_entries(p, out))
    }

    /// A lift of a weight-`k` cochain to `F^k`, replacing `v_0` by `p`.
    pub fn lift(&self, s: u32, t: u32, graded: &CobarComplex, x: &SparseVector) -> Result<IntegralChain> {
        let k = match graded.tag() {
            ComplexTag::AlgNov(k) => k,
            tag => return Err(CoreError::DegreeMismatch(format!("cannot lift a cochain of {tag}"))),
        };
        self.check_weight(k)?;
        let m = self.modulus;
        let gbasis = &graded.slice(s, t)?.basis;
        let mut map: HashMap<u32, u64> = HashMap::new();
        for (i, c) in x.iter() {
            let word = &gbasis[i as usize];
            let exps = graded.coefficients().exponents(word[0]);
            let e0 = exps.first().copied().unwrap_or(0);
            let v = exps.get(1..).unwrap_or(&[]);
            let vid = *self
                .vindex
                .get(&trim(v))
                .ok_or_else(|| CoreError::Truncation(format!("v-monomial {v:?} beyond the structure tables")))?;
            let mut iword = vec![vid];
            iword.extend_from_slice(&word[1..]);
            let idx = self
                .index_of(s, t, &iword)
                .ok_or_else(|| CoreError::OutOfRange(format!("bp ({s},{t})")))?;
            let coef = m.mul(c as u64, (m.prime().value() as u64).pow(e0) % m.value());
            let entry = map.entry(idx).or_insert(0);
            *entry = m.add(*entry, coef);
        }
        Ok(IntegralChain::from_map(m, map))
    }

    pub fn word_name(&self, word: &[u32]) -> String {
        let v = crate::hopf::polynomial::format_v_monomial(&{
            let mut e = vec![0];
            e.extend_from_slice(&self.vmonos[word[0] as usize]);
            e
        });
        let coef = if v == "1" { String::new() } else { v };
        let letters: Vec<String> = word[1..].iter().map(|&a| self.alg.monomial(a).to_string()).collect();
        format!("{coef}[{}]", letters.join("|"))
    }

    pub fn format_chain(&self, s: u32, t: u32, x: &IntegralChain) -> Result<String> {
        if x.is_zero() {
            return Ok("0".into());
        }
        let basis = &self.slice(s, t)?.basis;
        let parts: Vec<String> = x
            .entries
            .iter()
            .map(|&(i, c)| {
                let w = self.word_name(&basis[i as usize]);
                if c == 1 {
                    w
                } else {
                    format!("{c} {w}")
                }
            })
            .collect();
        Ok(parts.join(" + "))
    }
}

fn v_monomials(p: Prime, budget: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == cur.len() {
        out.push(trim(cur));
        return;
    }
    let d = p.generator_degree(i as u32 + 1);
    let mut e = 0;
    while e * d <= budget {
        cur[i] = e;
        v_monomials(p, budget - e * d, i + 1, cur, out);
        e += 1;
    }
    cur[i] = 0;
}
