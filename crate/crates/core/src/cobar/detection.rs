//! Cartan–Eilenberg filtration and leading terms of `A_*`-cocycles.
//!
//! The cobar complex of `A_*` splits as a direct sum over the number of
//! exterior factors, and the block with `k` factors computes
//! `Ext_{P_*}^{s-k,t-k}(F_p, I^k/I^{k+1})`. The identification is realized by
//! an explicit chain map
//!
//! ```text
//! f(m[g_1|...|g_s]) = (-1)^{s(s+1)/2 + t/q} [g_s|...|g_1] ∪ θ(m)
//! ```
//!
//! where `θ(m)` is a cochain with `k` exterior factors, built by induction on
//! degree so that `dθ(m) = -Σ [t^J] ∪ θ(c_J)` for `ψ̄(m) = Σ c_J ⊗ t^J`. Its
//! leading part sends `v_{i_1} ... v_{i_k}` (indices decreasing) to
//! `[τ_{i_1}|...|τ_{i_k}]`. Word reversal accounts for the Hazewinkel
//! coproduct being opposite to the Milnor one modulo `I`; the factor
//! `(-1)^{t/q}` makes `f[t_1] = [t_1]`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::complex::{CobarComplex, WordIndex};
use super::ext::ExtClass;
use crate::error::{CoreError, Result};
use crate::hopf::{PolynomialAlgebra, SteenrodAlgebra, SteenrodMonomial};
use crate::linalg::{solve_with, Echelon, SparseVector};
use crate::prime::Prime;

/// Filtration profile of an `A_*`-cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// The largest `k` such that the class has a representative with all words
    /// carrying at least `k` exterior factors.
    pub k: u32,
    /// Every block in which the class has a nonzero component.
    pub profile: Vec<u32>,
}

impl Filtration {
    /// More than one block carries a nonzero component.
    pub fn is_ambiguous(&self) -> bool {
        self.profile.len() > 1
    }
}

/// Leading term of an `A_*` class in `Ext_{P_*}(F_p, I^k/I^{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerm {
    pub k: u32,
    pub s: u32,
    pub t: u32,
    /// Coordinates in the class basis of the weight-`k` Ext group.
    pub coordinates: SparseVector,
    /// A cocycle representing the leading term.
    pub representative: SparseVector,
}

struct DetectionMap {
    /// Block-`k` boundaries (zero tags) followed by images of the weight-`k`
    /// class representatives (unit tags).
    reducer: Echelon<SparseVector>,
}

pub struct Detector<'a> {
    p: Prime,
    adams: &'a CobarComplex,
    algnov: Vec<&'a CobarComplex>,
    sigma: Vec<u32>,
    taus: Vec<u32>,
    /// `θ[k][m]`, a cochain in Adams slice `(k, |m| + k)`.
    theta: Vec<Vec<Option<SparseVector>>>,
    lookups: Mutex<HashMap<(u32, u32), Arc<WordIndex>>>,
    maps: Mutex<HashMap<(u32, u32, u32), Arc<DetectionMap>>>,
}

fn map_sign(p: Prime, s: u32, t: u32) -> bool {
    (s * (s + 1) / 2 + t / p.q()) % 2 == 1
}

fn restrict(v: &SparseVector, range: std::ops::Range<usize>) -> SparseVector {
    SparseVector::from_sorted(
        v.iter()
            .filter(|&(i, _)| range.contains(&(i as usize)))
            .collect(),
    )
}

impl<'a> Detector<'a> {
    /// `algnov[k]` must be the weight-`k` complex built over `poly`, and
    /// `adams` must be built over `steenrod` and cover every queried `(s, t)`.
    pub fn new(
        steenrod: &SteenrodAlgebra,
        poly: &PolynomialAlgebra,
        adams: &'a CobarComplex,
        algnov: Vec<&'a CobarComplex>,
    ) -> Result<Self> {
        let p = adams.prime();
        let sigma = (0..poly.len() as u32)
            .map(|id| {
                let m = SteenrodMonomial::new(&[], poly.monomial(id).exponents());
                steenrod
                    .id(&m)
                    .ok_or_else(|| CoreError::Truncation(format!("{m} is beyond the A_* tables")))
            })
            .collect::<Result<Vec<_>>>()?;
        let taus = (0..)
            .map_while(|i| steenrod.id(&SteenrodMonomial::tau(i)))
            .collect();
        let mut det = Detector {
            p,
            adams,
            algnov,
            sigma,
            taus,
            theta: Vec::new(),
            lookups: Mutex::new(HashMap::new()),
            maps: Mutex::new(HashMap::new()),
        };
        for k in 0..det.algnov.len() as u32 {
            let thetas = det.build_theta(k)?;
            det.theta.push(thetas);
        }
        Ok(det)
    }

    fn lookup(&self, s: u32, t: u32) -> Result<Arc<WordIndex>> {
        let mut guard = self.lookups.lock().unwrap();
        if let Some(l) = guard.get(&(s, t)) {
            return Ok(l.clone());
        }
        let slice = self.adams.slice(s, t)?;
        let l: Arc<WordIndex> = Arc::new(
            slice
                .basis
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), i as u32))
                .collect(),
        );
        guard.insert((s, t), l.clone());
        Ok(l)
    }

    fn adams_index(&self, s: u32, t: u32, word: &[u32]) -> Result<u32> {
        self.lookup(s, t)?.get(word).copied().ok_or_else(|| {
            CoreError::InconsistentComplex(format!("word {word:?} missing from Adams slice ({s},{t})"))
        })
    }

    fn build_theta(&self, k: u32) -> Result<Vec<Option<SparseVector>>> {
        let p = self.p;
        let complex = self.algnov[k as usize];
        let coeffs = complex.coefficients();
        let mut out: Vec<Option<SparseVector>> = Vec::with_capacity(coeffs.len());
        let mut solvers: HashMap<u32, Echelon<SparseVector>> = HashMap::new();
        for m in 0..coeffs.len() as u32 {
            let t = coeffs.degree(m) + k;
            if t > self.adams.t_max() || k > self.adams.s_max() {
                out.push(None);
                continue;
            }
            // leading word: exterior factors in decreasing index order
            let mut word = vec![0u32];
            let exps = coeffs.exponents(m);
            for i in (0..exps.len()).rev() {
                for _ in 0..exps[i] {
                    word.push(*self.taus.get(i).ok_or_else(|| {
                        CoreError::Truncation(format!("τ{i} is beyond the A_* tables"))
                    })?);
                }
            }
            let mut theta = SparseVector::unit(self.adams_index(k, t, &word)?);
            // target: -Σ x [σ g] ∪ θ(c)
            let mut raw: Vec<(u32, i64)> = Vec::new();
            for &(c, g, x) in coeffs.coaction(m) {
                let tc = out[c as usize].as_ref().ok_or_else(|| {
                    CoreError::Truncation(format!("θ of coefficient {} is unavailable", coeffs.name(c)))
                })?;
                let tc_t = coeffs.degree(c) + k;
                let slice = self.adams.slice(k, tc_t)?;
                for (i, y) in tc.iter() {
                    let w = &slice.basis[i as usize];
                    let mut nw = Vec::with_capacity(w.len() + 1);
                    nw.push(0);
                    nw.push(self.sigma[g as usize]);
                    nw.extend_from_slice(&w[1..]);
                    raw.push((self.adams_index(k + 1, t, &nw)?, -((x * y) as i64)));
                }
            }
            let mut target = SparseVector::from_entries(p, raw);
            target.sub(&self.adams.d(k, t, &theta)?, p);
            if !target.is_zero() {
                let solver = match solvers.entry(t) {
                    std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                    std::collections::hash_map::Entry::Vacant(v) => {
                        let slice = self.adams.slice(k, t)?;
                        let mut ech = Echelon::new(p, self.adams.dim(k + 1, t));
                        for i in slice.block_range(k) {
                            let _ = ech.insert(slice.differential[i].clone(), SparseVector::unit(i as u32));
                        }
                        v.insert(ech)
                    }
                };
                let corr = solve_with(solver, &target).ok_or_else(|| {
                    CoreError::InconsistentComplex(format!(
                        "no cochain θ({}) in weight {k}: obstruction in Adams ({}, {t})",
                        coeffs.name(m),
                        k + 1
                    ))
                })?;
                theta.add(&corr, p);
            }
            out.push(Some(theta));
        }
        Ok(out)
    }

    /// `θ(m)` for coefficient `m` of the weight-`k` complex.
    pub fn theta(&self, k: u32, m: u32) -> Option<&SparseVector> {
        self.theta.get(k as usize)?.get(m as usize)?.as_ref()
    }

    /// The chain map applied to a weight-`k` cochain in slice `(s, t)`; the
    /// result lies in Adams slice `(s + k, t + k)`.
    pub fn chain_map(&self, k: u32, s: u32, t: u32, x: &SparseVector) -> Result<SparseVector> {
        let p = self.p;
        let complex = self.algnov.get(k as usize).ok_or_else(|| {
            CoreError::OutOfRange(format!("weight {k} complex not available"))
        })?;
        let slice = complex.slice(s, t)?;
        let coeffs = complex.coefficients();
        let negative = map_sign(p, s, t);
        let mut raw: Vec<(u32, i64)> = Vec::new();
        for (i, c) in x.iter() {
            let w = &slice.basis[i as usize];
            let m = w[0];
            let theta = self.theta(k, m).ok_or_else(|| {
                CoreError::OutOfRange(format!("θ({}) not built in weight {k}", coeffs.name(m)))
            })?;
            let theta_slice = self.adams.slice(k, coeffs.degree(m) + k)?;
            let mut prefix = vec![0u32];
            prefix.extend(w[1..].iter().rev().map(|&g| self.sigma[g as usize]));
            for (j, y) in theta.iter() {
                let tw = &theta_slice.basis[j as usize];
                let mut nw = prefix.clone();
                nw.extend_from_slice(&tw[1..]);
                let idx = self.adams_index(s + k, t + k, &nw)?;
                let val = (c * y) as i64;
                raw.push((idx, if negative { -val } else { val }));
            }
        }
        Ok(SparseVector::from_entries(p, raw))
    }

    /// Checks `d f = f d` on every basis word of weight-`k` slice `(s, t)`.
    pub fn check_chain_map(&self, k: u32, s: u32, t: u32) -> Result<()> {
        let complex = self.algnov[k as usize];
        let p = self.p;
        let dim = complex.dim(s, t);
        for i in 0..dim as u32 {
            let e = SparseVector::unit(i);
            let lhs = self.adams.d(s + k, t + k, &self.chain_map(k, s, t, &e)?)?;
            let rhs = self.chain_map(k, s + 1, t, &complex.d(s, t, &e)?)?;
            let mut diff = lhs;
            diff.sub(&rhs, p);
            if !diff.is_zero() {
                return Err(CoreError::InconsistentComplex(format!(
                    "detection map does not commute with d on weight {k} word {i} at ({s},{t})"
                )));
            }
        }
        Ok(())
    }

    fn detection_map(&self, k: u32, s: u32, t: u32) -> Result<Arc<DetectionMap>> {
        if let Some(m) = self.maps.lock().unwrap().get(&(k, s, t)) {
            return Ok(m.clone());
        }
        let p = self.p;
        let (sa, ta) = (s + k, t + k);
        let aslice = self.adams.slice(sa, ta)?;
        let mut reducer: Echelon<SparseVector> = Echelon::new(p, aslice.dim());
        if sa > 0 {
            let prev = self.adams.slice(sa - 1, ta)?;
            for i in prev.block_range(k) {
                let _ = reducer.insert(prev.differential[i].clone(), SparseVector::zero());
            }
        }
        let group = self.algnov[k as usize].ext(s, t)?;
        for class in group.classes() {
            let image = self.chain_map(k, s, t, &class.representative)?;
            if reducer.insert(image, SparseVector::unit(class.index as u32)).is_err() {
                return Err(CoreError::InconsistentComplex(format!(
                    "detection map kills {} at Adams ({sa},{ta})",
                    class.name()
                )));
            }
        }
        let map = Arc::new(DetectionMap { reducer });
        self.maps.lock().unwrap().insert((k, s, t), map.clone());
        Ok(map)
    }

    /// Filtration of the class of the cocycle `z` in Adams slice `(s, t)`.
    pub fn ce_filtration(&self, s: u32, t: u32, z: &SparseVector) -> Result<Filtration> {
        let slice = self.adams.slice(s, t)?;
        let group = self.adams.ext(s, t)?;
        let mut profile = Vec::new();
        for &(b, _) in &slice.blocks {
            let part = restrict(z, slice.block_range(b));
            if !part.is_zero() && !group.is_boundary(&part)? {
                profile.push(b);
            }
        }
        let k = *profile.first().ok_or_else(|| {
            CoreError::Filtration(format!("the class at Adams ({s},{t}) is zero"))
        })?;
        Ok(Filtration { k, profile })
    }

    /// Projection of the class of `z` to the weight-`k` Ext group at
    /// `(s - k, t - k)`.
    pub fn leading_term(&self, s: u32, t: u32, z: &SparseVector, k: u32) -> Result<LeadingTerm> {
        if k > s || k > t {
            return Err(CoreError::Filtration(format!("filtration {k} exceeds ({s},{t})")));
        }
        if k as usize >= self.algnov.len() {
            return Err(CoreError::OutOfRange(format!("weight {k} complex not built")));
        }
        let p = self.p;
        let (sx, tx) = (s - k, t - k);
        let slice = self.adams.slice(s, t)?;
        let part = restrict(z, slice.block_range(k));
        let map = self.detection_map(k, sx, tx)?;
        let mut v = part;
        let mut tag = SparseVector::zero();
        map.reducer.reduce_leading(&mut v, &mut tag);
        if !v.is_zero() {
            return Err(CoreError::Filtration(format!(
                "component of filtration {k} at Adams ({s},{t}) is not in the image of the detection map"
            )));
        }
        tag.scale(p.value() - 1, p);
        if tag.is_zero() {
            return Err(CoreError::Filtration(format!(
                "leading term of filtration {k} at Adams ({s},{t}) vanishes"
            )));
        }
        let group = self.algnov[k as usize].ext(sx, tx)?;
        let mut representative = SparseVector::zero();
        for (j, c) in tag.iter() {
            representative.add_scaled(&group.classes()[j as usize].representative, c, p);
        }
        Ok(LeadingTerm {
            k,
            s: sx,
            t: tx,
            coordinates: tag,
            representative,
        })
    }

    /// Leading term of a basis class at its own filtration.
    pub fn detect_class(&self, class: &ExtClass) -> Result<(Filtration, LeadingTerm)> {
        let f = self.ce_filtration(class.s, class.t, &class.representative)?;
        let lt = self.leading_term(class.s, class.t, &class.representative, f.k)?;
        Ok((f, lt))
    }
}
