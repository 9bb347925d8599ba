//! Reduced cobar complexes over `F_p` with coefficients in a comodule.
//!
//! A basis word is `c[a_1|...|a_s]` with `c` a coefficient basis element and
//! `a_i` monomials of positive degree. The differential is
//!
//! ```text
//! d(c[a_1|...|a_s]) = Σ c'[g|a_1|...|a_s] + Σ_i (-1)^i c[a_1|...|Δ̄a_i|...|a_s]
//! ```
//!
//! where `ψ̄(c) = Σ c' ⊗ g` is the reduced coaction. Internal-degree signs live
//! entirely inside the coproduct of `A_*`; the alternating signs above are all
//! that is needed for `d² = 0`.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{CoreError, Result};
use crate::hopf::bp::BpStructure;
use crate::hopf::polynomial::{format_v_monomial, gr_coaction_monomial, v_monomial_degree, PolynomialAlgebra};
use crate::hopf::steenrod::SteenrodAlgebra;
use crate::linalg::{Echelon, SparseVector};
use crate::prime::Prime;

/// A coalgebra given by a finite monomial basis with reduced coproducts.
pub trait Coalgebra: Send + Sync {
    fn prime(&self) -> Prime;
    fn t_max(&self) -> u32;
    fn ids_of_degree(&self, d: u32) -> std::ops::Range<u32>;
    fn letter_degree(&self, id: u32) -> u32;
    fn reduced_coproduct(&self, id: u32) -> &[(u32, u32, u32)];
    /// Grading preserved by the coproduct, used to split the complex into
    /// blocks (the number of exterior factors for `A_*`).
    fn block(&self, _id: u32) -> u32 {
        0
    }
    fn letter_name(&self, id: u32) -> String;
}

impl Coalgebra for SteenrodAlgebra {
    fn prime(&self) -> Prime {
        SteenrodAlgebra::prime(self)
    }
    fn t_max(&self) -> u32 {
        SteenrodAlgebra::t_max(self)
    }
    fn ids_of_degree(&self, d: u32) -> std::ops::Range<u32> {
        SteenrodAlgebra::ids_of_degree(self, d)
    }
    fn letter_degree(&self, id: u32) -> u32 {
        self.degree(id)
    }
    fn reduced_coproduct(&self, id: u32) -> &[(u32, u32, u32)] {
        SteenrodAlgebra::reduced_coproduct(self, id)
    }
    fn block(&self, id: u32) -> u32 {
        self.tau_count(id)
    }
    fn letter_name(&self, id: u32) -> String {
        self.monomial(id).to_string()
    }
}

impl Coalgebra for PolynomialAlgebra {
    fn prime(&self) -> Prime {
        PolynomialAlgebra::prime(self)
    }
    fn t_max(&self) -> u32 {
        PolynomialAlgebra::t_max(self)
    }
    fn ids_of_degree(&self, d: u32) -> std::ops::Range<u32> {
        PolynomialAlgebra::ids_of_degree(self, d)
    }
    fn letter_degree(&self, id: u32) -> u32 {
        self.degree(id)
    }
    fn reduced_coproduct(&self, id: u32) -> &[(u32, u32, u32)] {
        PolynomialAlgebra::reduced_coproduct(self, id)
    }
    fn letter_name(&self, id: u32) -> String {
        self.monomial(id).to_string()
    }
}

/// Which complex a slice belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexTag {
    /// Cobar complex of `A_*` with `F_p` coefficients.
    Adams,
    /// Cobar complex of `P_*` with coefficients in `I^k/I^{k+1}`.
    AlgNov(u32),
    /// Cobar complex of `BP_*BP` with `BP_*` coefficients modulo `p^N`.
    Integral,
}

impl fmt::Display for ComplexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexTag::Adams => write!(f, "adams"),
            ComplexTag::AlgNov(k) => write!(f, "algnov-k{k}"),
            ComplexTag::Integral => write!(f, "bp"),
        }
    }
}

impl std::str::FromStr for ComplexTag {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adams" => Ok(ComplexTag::Adams),
            "bp" => Ok(ComplexTag::Integral),
            _ => s
                .strip_prefix("algnov-k")
                .and_then(|k| k.parse().ok())
                .map(ComplexTag::AlgNov)
                .ok_or_else(|| CoreError::OutOfRange(format!("unknown complex tag {s:?}"))),
        }
    }
}

/// A finite basis of a comodule with its reduced coaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficients {
    names: Vec<String>,
    exponents: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    /// `ψ̄(c)` as `(coefficient, letter, scalar)`.
    coaction: Vec<Vec<(u32, u32, u32)>>,
    index: HashMap<Vec<u32>, u32>,
}

impl Coefficients {
    /// The trivial comodule `F_p`.
    pub fn trivial() -> Self {
        Coefficients {
            names: vec![String::new()],
            exponents: vec![Vec::new()],
            degrees: vec![0],
            coaction: vec![Vec::new()],
            index: [(Vec::new(), 0)].into_iter().collect(),
        }
    }

    /// `I^k/I^{k+1}` spanned by the weight-`k` monomials in `v_0, v_1, ...`
    /// of degree `≤ t_max`, with coaction from the right unit.
    pub fn weight(bp: &BpStructure, alg: &PolynomialAlgebra, k: u32) -> Result<Self> {
        let p = bp.prime();
        let g = bp.ngens();
        let mut exps: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; g + 1];
        weight_monomials(p, bp.t_max(), k, 0, &mut cur, &mut exps);
        let trim = |e: &[u32]| {
            let mut e = e.to_vec();
            while e.last() == Some(&0) {
                e.pop();
            }
            e
        };
        let mut exps: Vec<Vec<u32>> = exps.iter().map(|e| trim(e)).collect();
        // degree, then larger powers of low generators first
        exps.sort_by(|a, b| (v_monomial_degree(a, p), std::cmp::Reverse(a)).cmp(&(v_monomial_degree(b, p), std::cmp::Reverse(b))));
        let index: HashMap<Vec<u32>, u32> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let mut coaction = Vec::with_capacity(exps.len());
        for e in &exps {
            let mut terms = Vec::new();
            for (v, t, c) in gr_coaction_monomial(bp, e)? {
                if t.is_empty() {
                    continue;
                }
                let letter = alg
                    .id(&crate::hopf::PolynomialMonomial::new(&t))
                    .ok_or_else(|| CoreError::Truncation(format!("coaction letter of degree beyond {}", bp.t_max())))?;
                let coef = *index
                    .get(&trim(&v))
                    .ok_or_else(|| CoreError::Filtration(format!("coaction target {} has the wrong weight", format_v_monomial(&v))))?;
                terms.push((coef, letter, c));
            }
            terms.sort_unstable();
            coaction.push(terms);
        }
        Ok(Coefficients {
            names: exps.iter().map(|e| format_v_monomial(e)).collect(),
            degrees: exps.iter().map(|e| v_monomial_degree(e, p)).collect(),
            exponents: exps,
            coaction,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, c: u32) -> &str {
        &self.names[c as usize]
    }

    pub fn degree(&self, c: u32) -> u32 {
        self.degrees[c as usize]
    }

    pub fn exponents(&self, c: u32) -> &[u32] {
        &self.exponents[c as usize]
    }

    pub fn id(&self, exps: &[u32]) -> Option<u32> {
        let mut e = exps.to_vec();
        while e.last() == Some(&0) {
            e.pop();
        }
        self.index.get(&e).copied()
    }

    pub fn coaction(&self, c: u32) -> &[(u32, u32, u32)] {
        &self.coaction[c as usize]
    }
}

fn weight_monomials(p: Prime, budget: u32, k: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == cur.len() - 1 {
        let d = if i == 0 { 0 } else { p.generator_degree(i as u32) };
        if k * d <= budget {
            cur[i] = k;
            out.push(cur.clone());
            cur[i] = 0;
        }
        return;
    }
    let d = if i == 0 { 0 } else { p.generator_degree(i as u32) };
    for e in 0..=k {
        if e * d > budget {
            break;
        }
        cur[i] = e;
        weight_monomials(p, budget - e * d, k - e, i + 1, cur, out);
    }
    cur[i] = 0;
}

/// One bidegree of a cobar complex: an ordered basis of words and the
/// differential into the slice one homological degree up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainSlice {
    pub tag: ComplexTag,
    pub s: u32,
    pub t: u32,
    /// Each word is `[coefficient, letter_1, ..., letter_s]`.
    pub basis: Vec<Vec<u32>>,
    /// `(block, first index)` for each block present, in basis order.
    pub blocks: Vec<(u32, u32)>,
    /// Image of each basis word; empty when the target slice was not built.
    pub differential: Vec<SparseVector>,
}

impl CochainSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Index range of the words in block `b`.
    pub fn block_range(&self, b: u32) -> std::ops::Range<usize> {
        for (i, &(blk, start)) in self.blocks.iter().enumerate() {
            if blk == b {
                let end = self.blocks.get(i + 1).map_or(self.basis.len(), |x| x.1 as usize);
                return start as usize..end;
            }
        }
        0..0
    }

    pub fn block_of(&self, index: usize) -> u32 {
        let pos = self.blocks.partition_point(|&(_, start)| start as usize <= index);
        self.blocks[pos - 1].0
    }
}

/// Position of each word in its slice basis.
pub(crate) type WordIndex = HashMap<Vec<u32>, u32>;

/// A cobar complex built over the range `s ≤ s_max + 1`, `t ≤ t_max`, with
/// differentials out of every slice with `s ≤ s_max`.
pub struct CobarComplex {
    tag: ComplexTag,
    alg: Arc<dyn Coalgebra>,
    coeffs: Coefficients,
    s_max: u32,
    t_max: u32,
    slices: HashMap<(u32, u32), CochainSlice>,
    ranks: HashMap<(u32, u32), OnceLock<usize>>,
    pub(crate) groups: HashMap<(u32, u32), OnceLock<Result<Arc<super::ext::ExtGroup>>>>,
    lookups: HashMap<(u32, u32), OnceLock<WordIndex>>,
}

impl CobarComplex {
    pub fn build(tag: ComplexTag, alg: Arc<dyn Coalgebra>, coeffs: Coefficients, s_max: u32, t_max: u32) -> Result<Self> {
        if t_max > alg.t_max() {
            return Err(CoreError::Truncation(format!(
                "complex needs degrees up to {t_max}, structure tables stop at {}",
                alg.t_max()
            )));
        }
        let mut slices = HashMap::new();
        for t in 0..=t_max {
            let mut lookup_next: Option<HashMap<Vec<u32>, u32>> = None;
            for s in (0..=s_max + 1).rev() {
                let basis = enumerate_words(alg.as_ref(), &coeffs, s, t);
                let lookup: HashMap<Vec<u32>, u32> =
                    basis.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
                let blocks = block_starts(alg.as_ref(), &basis);
                let differential = match &lookup_next {
                    Some(next) if s <= s_max => basis
                        .iter()
                        .map(|w| apply_d(alg.as_ref(), &coeffs, w, next))
                        .collect::<Result<Vec<_>>>()?,
                    _ => Vec::new(),
                };
                slices.insert(
                    (s, t),
                    CochainSlice {
                        tag,
                        s,
                        t,
                        basis,
                        blocks,
                        differential,
                    },
                );
                lookup_next = Some(lookup);
            }
        }
        Ok(Self::from_slices(tag, alg, coeffs, s_max, t_max, slices))
    }

    /// Reassembles a complex from slices, e.g. loaded from a cache.
    pub fn from_slices(
        tag: ComplexTag,
        alg: Arc<dyn Coalgebra>,
        coeffs: Coefficients,
        s_max: u32,
        t_max: u32,
        slices: HashMap<(u32, u32), CochainSlice>,
    ) -> Self {
        let ranks = slices.keys().map(|&k| (k, OnceLock::new())).collect();
        let groups = slices.keys().map(|&k| (k, OnceLock::new())).collect();
        let lookups = slices.keys().map(|&k| (k, OnceLock::new())).collect();
        CobarComplex {
            tag,
            alg,
            coeffs,
            s_max,
            t_max,
            slices,
            ranks,
            groups,
            lookups,
        }
    }

    pub fn tag(&self) -> ComplexTag {
        self.tag
    }

    pub fn prime(&self) -> Prime {
        self.alg.prime()
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn coalgebra(&self) -> &dyn Coalgebra {
        self.alg.as_ref()
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn slice(&self, s: u32, t: u32) -> Result<&CochainSlice> {
        self.slices
            .get(&(s, t))
            .ok_or_else(|| CoreError::OutOfRange(format!("{} ({s},{t})", self.tag)))
    }

    pub fn slices(&self) -> impl Iterator<Item = &CochainSlice> {
        self.slices.values()
    }

    /// Position of `word` in the basis of slice `(s, t)`.
    pub fn index_of(&self, s: u32, t: u32, word: &[u32]) -> Option<u32> {
        let cell = self.lookups.get(&(s, t))?;
        let map = cell.get_or_init(|| {
            self.slices[&(s, t)]
                .basis
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), i as u32))
                .collect()
        });
        map.get(word).copied()
    }

    pub fn dim(&self, s: u32, t: u32) -> usize {
        self.slices.get(&(s, t)).map_or(0, |x| x.dim())
    }

    pub(crate) fn check_ext_range(&self, s: u32, t: u32) -> Result<()> {
        if s > self.s_max || t > self.t_max {
            return Err(CoreError::OutOfRange(format!(
                "{} ({s},{t}) with s_max = {}, t_max = {}",
                self.tag, self.s_max, self.t_max
            )));
        }
        Ok(())
    }

    /// `d(v)` for a cochain `v` in slice `(s, t)`.
    pub fn d(&self, s: u32, t: u32, v: &SparseVector) -> Result<SparseVector> {
        self.check_ext_range(s, t)?;
        let slice = self.slice(s, t)?;
        let p = self.prime();
        let mut out = SparseVector::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&slice.differential[i as usize], c, p);
        }
        Ok(out)
    }

    /// Rank of `d: (s, t) → (s + 1, t)`; zero outside the differential range.
    pub fn rank(&self, s: u32, t: u32) -> usize {
        let Some(cell) = self.ranks.get(&(s, t)) else { return 0 };
        let slice = &self.slices[&(s, t)];
        if slice.differential.is_empty() {
            return 0;
        }
        *cell.get_or_init(|| {
            let target = self.dim(s + 1, t);
            let mut total = 0;
            for &(b, _) in &slice.blocks {
                let mut ech: Echelon<()> = Echelon::new(self.prime(), target);
                for i in slice.block_range(b) {
                    ech.insert_plain(slice.differential[i].clone());
                }
                total += ech.rank();
            }
            total
        })
    }

    /// `dim H^{s,t}` from ranks alone.
    pub fn ext_dim(&self, s: u32, t: u32) -> Result<usize> {
        self.check_ext_range(s, t)?;
        let incoming = if s == 0 { 0 } else { self.rank(s - 1, t) };
        Ok(self.dim(s, t) - self.rank(s, t) - incoming)
    }

    /// Checks `d ∘ d = 0` out of slice `(s, t)`.
    pub fn check_d_squared(&self, s: u32, t: u32) -> Result<()> {
        if s + 1 > self.s_max {
            return Ok(());
        }
        let slice = self.slice(s, t)?;
        for (i, img) in slice.differential.iter().enumerate() {
            if !self.d(s + 1, t, img)?.is_zero() {
                return Err(CoreError::InconsistentComplex(format!(
                    "{}: d∘d of basis word {i} in ({s},{t}) is nonzero",
                    self.tag
                )));
            }
        }
        Ok(())
    }

    pub fn word_name(&self, word: &[u32]) -> String {
        let coef = match self.coeffs.name(word[0]) {
            "1" => "",
            c => c,
        };
        let letters: Vec<String> = word[1..].iter().map(|&a| self.alg.letter_name(a)).collect();
        format!("{coef}[{}]", letters.join("|"))
    }

    /// Readable form of a cochain.
    pub fn format_cochain(&self, s: u32, t: u32, v: &SparseVector) -> Result<String> {
        let slice = self.slice(s, t)?;
        if v.is_zero() {
            return Ok("0".into());
        }
        let parts: Vec<String> = v
            .iter()
            .map(|(i, c)| {
                let w = self.word_name(&slice.basis[i as usize]);
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

/// Words `[c, a_1, ..., a_s]` of total degree `t`, ordered by block, then
/// coefficient, then letters.
fn enumerate_words(alg: &dyn Coalgebra, coeffs: &Coefficients, s: u32, t: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for c in 0..coeffs.len() as u32 {
        let dc = coeffs.degree(c);
        if dc > t {
            continue;
        }
        let mut word = vec![c];
        letters_of_degree(alg, s, t - dc, &mut word, &mut out);
    }
    out.sort_by_cached_key(|w| (word_block(alg, w), w.clone()));
    out
}

pub(crate) fn letters_of_degree(alg: &dyn Coalgebra, s: u32, t: u32, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if s == 0 {
        if t == 0 {
            out.push(word.clone());
        }
        return;
    }
    for d in 1..=t {
        for id in alg.ids_of_degree(d) {
            word.push(id);
            letters_of_degree(alg, s - 1, t - d, word, out);
            word.pop();
        }
    }
}

fn word_block(alg: &dyn Coalgebra, w: &[u32]) -> u32 {
    w[1..].iter().map(|&a| alg.block(a)).sum()
}

fn block_starts(alg: &dyn Coalgebra, basis: &[Vec<u32>]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for (i, w) in basis.iter().enumerate() {
        let b = word_block(alg, w);
        if out.last().is_none_or(|&(last, _)| last != b) {
            out.push((b, i as u32));
        }
    }
    out
}

fn apply_d(alg: &dyn Coalgebra, coeffs: &Coefficients, w: &[u32], next: &HashMap<Vec<u32>, u32>) -> Result<SparseVector> {
    let p = alg.prime();
    let mut raw: Vec<(u32, i64)> = Vec::new();
    let mut push = |word: Vec<u32>, c: u32, negative: bool| -> Result<()> {
        let idx = *next.get(&word).ok_or_else(|| {
            CoreError::InconsistentComplex(format!("differential produced a word outside the target slice: {word:?}"))
        })?;
        let c = c as i64;
        raw.push((idx, if negative { -c } else { c }));
        Ok(())
    };
    for &(c2, g, x) in coeffs.coaction(w[0]) {
        let mut word = Vec::with_capacity(w.len() + 1);
        word.push(c2);
        word.push(g);
        word.extend_from_slice(&w[1..]);
        push(word, x, false)?;
    }
    for i in 1..w.len() {
        for &(l, r, x) in alg.reduced_coproduct(w[i]) {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.extend_from_slice(&w[..i]);
            word.push(l);
            word.push(r);
            word.extend_from_slice(&w[i + 1..]);
            push(word, x, i % 2 == 1)?;
        }
    }
    Ok(SparseVector::from_entries(p, raw))
}
