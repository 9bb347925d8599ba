//! The algebraic Novikov spectral sequence
//!
//! ```text
//! E_2^{s,t,k} = Ext_P^{s,t}(I^k/I^{k+1})  ⇒  Ext_{BP_*BP}^{s,t}(BP_*)
//! ```
//!
//! computed from the `I`-adic filtration of the integral cobar complex.
//! Pages are indexed so that `d_r` raises the weight `k` by `r - 1`.
//!
//! Every surviving class carries an integral cochain `c ∈ F^k` with
//! `gr_k(c)` its representative and `dc ∈ F^{k+r-1}` on page `r`. Then
//! `d_r` of the class is `gr_{k+r-1}(dc)`, reduced against everything that
//! is already zero on page `r`. Each reduction step subtracts a known
//! cochain from `c`, so the returned witness is always a genuine lift.
//!
//! A differential whose target lies outside the window is reported as
//! undetermined and the class is no longer used as a source.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::cobar::{algnov_complex, CobarComplex, ExtGroup, IntegralChain, IntegralComplex};
use crate::error::{CoreError, Result};
use crate::hopf::{BpStructure, PolynomialAlgebra};
use crate::linalg::{Echelon, Modulus, Payload, SparseVector};
use crate::prime::Prime;

/// The range of a computation: `s ≤ s_max`, `t ≤ t_max`, `k ≤ k_max`, pages
/// `2 ≤ r ≤ r_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgNovWindow {
    pub s_max: u32,
    pub t_max: u32,
    pub k_max: u32,
    pub r_max: u32,
    /// Digits of `p`-adic precision; `None` means [`AlgNovWindow::default_precision`].
    pub precision: Option<u32>,
}

impl AlgNovWindow {
    pub fn new(s_max: u32, t_max: u32, k_max: u32, r_max: u32) -> Self {
        AlgNovWindow {
            s_max,
            t_max,
            k_max,
            r_max,
            precision: None,
        }
    }

    pub fn default_precision(&self) -> u32 {
        self.k_max + self.r_max + 2
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or_else(|| self.default_precision())
    }

    pub fn contains(&self, s: u32, t: u32, k: u32) -> bool {
        s <= self.s_max && t <= self.t_max && k <= self.k_max
    }
}

/// A class of `E_2`, given by coordinates in the basis of
/// `Ext_P^{s,t}(I^k/I^{k+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NovClass {
    pub s: u32,
    pub t: u32,
    pub k: u32,
    pub coordinates: SparseVector,
}

impl NovClass {
    pub fn basis(s: u32, t: u32, k: u32, index: usize) -> Self {
        NovClass {
            s,
            t,
            k,
            coordinates: SparseVector::unit(index as u32),
        }
    }

    /// E.g. `algnov-k1(2,12)#0` or `2 algnov-k0(2,12)#0 + algnov-k0(2,12)#1`.
    pub fn name(&self) -> String {
        if self.coordinates.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coordinates
            .iter()
            .map(|(i, c)| {
                let n = format!("algnov-k{}({},{})#{i}", self.k, self.s, self.t);
                if c == 1 {
                    n
                } else {
                    format!("{c} {n}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// A nonzero differential `d_r(source) = target` with its integral witness:
/// `gr_k(witness)` represents `source` and `gr_{k+r-1}(d witness)` is
/// `target_rep`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialRecord {
    pub r: u32,
    pub source: NovClass,
    pub target: NovClass,
    pub source_rep: SparseVector,
    pub target_rep: SparseVector,
    pub witness: IntegralChain,
}

/// What is known about `d_r` of a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrValue {
    Zero,
    Nonzero(NovClass),
    /// The target lies outside the window, here or on an earlier page.
    Undetermined,
    /// The class does not survive to page `r`.
    NotOnPage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassStatus {
    /// Zero under every `d_r` with `r ≤ r_max`.
    PermanentInRange,
    /// Some `d_r` (first at this page) could not be evaluated in the window.
    Undetermined(u32),
}

/// The state of one multidegree at the start of page `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    /// `E_2` coordinates of a basis of `E_r`.
    pub survivors: Vec<SparseVector>,
    /// Page at which each survivor became undetermined, if it has.
    pub undetermined: Vec<Option<u32>>,
    /// `d_r` of each survivor in `E_2` coordinates of the target; `None` if
    /// undetermined.
    pub values: Vec<Option<SparseVector>>,
    /// `E_2` coordinates of classes already hit by earlier differentials.
    pub killed: Vec<SparseVector>,
}

impl PageEntry {
    pub fn dim(&self) -> usize {
        self.survivors.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageTable {
    pub r: u32,
    pub entries: BTreeMap<(u32, u32, u32), PageEntry>,
}

/// A class of the last computed page with its status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalClass {
    pub class: NovClass,
    pub status: ClassStatus,
}

/// The outcome of running all pages through `r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgNovRun {
    pub prime: Prime,
    pub window: AlgNovWindow,
    pub pages: Vec<PageTable>,
    pub records: Vec<DifferentialRecord>,
    pub survivors: Vec<FinalClass>,
}

impl AlgNovRun {
    pub fn page(&self, r: u32) -> Option<&PageTable> {
        self.pages.iter().find(|pg| pg.r == r)
    }

    /// `dim E_r^{s,t,k}`, or `None` outside the computed pages.
    pub fn dim(&self, r: u32, s: u32, t: u32, k: u32) -> Option<usize> {
        if r == self.window.r_max + 1 {
            return Some(self.survivors.iter().filter(|c| (c.class.s, c.class.t, c.class.k) == (s, t, k)).count());
        }
        Some(self.page(r)?.entries.get(&(s, t, k)).map_or(0, |e| e.dim()))
    }

    /// `d_r` of a class given in `E_2` coordinates.
    pub fn differential(&self, r: u32, class: &NovClass) -> Result<DrValue> {
        let p = self.prime;
        let page = self
            .page(r)
            .ok_or_else(|| CoreError::OutOfRange(format!("page {r} was not computed (r_max = {})", self.window.r_max)))?;
        let (s, t, k) = (class.s, class.t, class.k);
        if !self.window.contains(s, t, k) {
            return Err(CoreError::OutOfRange(format!("({s},{t},{k}) is outside the window")));
        }
        let Some(entry) = page.entries.get(&(s, t, k)) else {
            return Ok(if class.coordinates.is_zero() { DrValue::Zero } else { DrValue::NotOnPage });
        };
        let mut ech: Echelon<SparseVector> = Echelon::new(p, 0);
        for v in &entry.killed {
            let _ = ech.insert(v.clone(), SparseVector::zero());
        }
        for (i, v) in entry.survivors.iter().enumerate() {
            let _ = ech.insert(v.clone(), SparseVector::unit(i as u32));
        }
        let mut v = class.coordinates.clone();
        let mut tag = SparseVector::zero();
        ech.reduce_fully(&mut v, &mut tag);
        if !v.is_zero() {
            return Ok(DrValue::NotOnPage);
        }
        tag.scale(p.value() - 1, p);
        let mut value = SparseVector::zero();
        for (i, a) in tag.iter() {
            match &entry.values[i as usize] {
                Some(y) => value.add_scaled(y, a, p),
                None => return Ok(DrValue::Undetermined),
            }
        }
        Ok(if value.is_zero() {
            DrValue::Zero
        } else {
            DrValue::Nonzero(NovClass {
                s: s + 1,
                t,
                k: k + r - 1,
                coordinates: value,
            })
        })
    }
}

/// `(survivor index, corrected chain, target coordinates)` of one `d_r`.
type Outgoing = (usize, IntegralChain, SparseVector);

/// Integral cochain plus coordinates in a list of survivors, combined in
/// lockstep during elimination.
#[derive(Clone, Debug)]
struct Witness {
    chain: IntegralChain,
    coords: SparseVector,
}

impl Payload for Witness {
    fn zero_like(&self) -> Self {
        Witness {
            chain: self.chain.zero_like(),
            coords: SparseVector::zero(),
        }
    }
    fn add_scaled(&mut self, other: &Self, c: u32, p: Prime) {
        self.chain.add_scaled(&other.chain, c, p);
        self.coords.add_scaled(&other.coords, c, p);
    }
}

#[derive(Clone, Debug)]
struct Survivor {
    gr: SparseVector,
    chain: IntegralChain,
    undetermined: Option<u32>,
}

/// An image vector landing at a position, in the survivor coordinates there.
struct Image {
    coords: SparseVector,
    gr: SparseVector,
    chain: IntegralChain,
}

/// The graded and integral complexes for one prime and window.
pub struct AlgNovEngine {
    prime: Prime,
    window: AlgNovWindow,
    bp: Arc<BpStructure>,
    alg: Arc<PolynomialAlgebra>,
    graded: Vec<CobarComplex>,
    integral: IntegralComplex,
}

impl AlgNovEngine {
    pub fn new(prime: Prime, window: AlgNovWindow) -> Result<Self> {
        let bp = Arc::new(BpStructure::new(prime, window.t_max)?);
        let alg = Arc::new(PolynomialAlgebra::new(&bp));
        let graded = (0..=window.k_max)
            .map(|k| algnov_complex(&bp, alg.clone(), k, window.s_max, window.t_max))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(bp, alg, graded, window)
    }

    /// Assembles an engine from prebuilt graded complexes, one per weight.
    pub fn from_parts(
        bp: Arc<BpStructure>,
        alg: Arc<PolynomialAlgebra>,
        graded: Vec<CobarComplex>,
        window: AlgNovWindow,
    ) -> Result<Self> {
        let prime = bp.prime();
        if window.r_max < 2 {
            return Err(CoreError::OutOfRange(format!("r_max = {} is below the first page", window.r_max)));
        }
        if graded.len() != window.k_max as usize + 1 {
            return Err(CoreError::OutOfRange(format!(
                "expected {} graded complexes, got {}",
                window.k_max + 1,
                graded.len()
            )));
        }
        let precision = window.precision();
        if precision <= window.k_max {
            return Err(CoreError::Precision {
                precision,
                context: format!("weights up to {} must be resolved", window.k_max),
            });
        }
        let modulus = Modulus::new(prime, precision)?;
        let integral = IntegralComplex::build(bp.clone(), alg.clone(), modulus, window.s_max, window.t_max)?;
        Ok(AlgNovEngine {
            prime,
            window,
            bp,
            alg,
            graded,
            integral,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn window(&self) -> AlgNovWindow {
        self.window
    }

    pub fn bp(&self) -> &Arc<BpStructure> {
        &self.bp
    }

    pub fn polynomial_algebra(&self) -> &Arc<PolynomialAlgebra> {
        &self.alg
    }

    pub fn graded(&self, k: u32) -> Result<&CobarComplex> {
        self.graded
            .get(k as usize)
            .ok_or_else(|| CoreError::OutOfRange(format!("weight {k} beyond k_max = {}", self.window.k_max)))
    }

    pub fn integral(&self) -> &IntegralComplex {
        &self.integral
    }

    /// `E_2^{s,t,k} = Ext_P^{s,t}(I^k/I^{k+1})`.
    pub fn e2(&self, s: u32, t: u32, k: u32) -> Result<Arc<ExtGroup>> {
        self.graded(k)?.ext(s, t)
    }

    /// Boundaries at a position, with integral witnesses whose differential
    /// has exactly that image in `gr_k`.
    fn initial_boundaries(&self, s: u32, t: u32, k: u32) -> Result<Echelon<Witness>> {
        let g = self.graded(k)?;
        let mut ech = Echelon::new(self.prime, g.dim(s, t));
        if s == 0 {
            return Ok(ech);
        }
        let prev = g.slice(s - 1, t)?;
        for (i, b) in prev.differential.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let e = SparseVector::unit(i as u32);
            let chain = self.integral.lift(s - 1, t, g, &e)?;
            let _ = ech.insert(
                b.clone(),
                Witness {
                    chain,
                    coords: SparseVector::zero(),
                },
            );
        }
        Ok(ech)
    }

    /// Runs pages `2..=r_max` over the whole window.
    pub fn run(&self) -> Result<AlgNovRun> {
        let p = self.prime;
        let w = self.window;
        let mut positions: BTreeMap<(u32, u32, u32), Vec<Survivor>> = BTreeMap::new();
        for k in 0..=w.k_max {
            let g = self.graded(k)?;
            for t in 0..=w.t_max {
                for s in 0..=w.s_max {
                    let group = g.ext(s, t)?;
                    if group.dim() == 0 {
                        continue;
                    }
                    let mut list = Vec::new();
                    for class in group.classes() {
                        list.push(Survivor {
                            gr: class.representative.clone(),
                            chain: self.integral.lift(s, t, g, &class.representative)?,
                            undetermined: None,
                        });
                    }
                    positions.insert((s, t, k), list);
                }
            }
        }
        let mut boundaries: HashMap<(u32, u32, u32), Echelon<Witness>> = HashMap::new();
        let mut killed: HashMap<(u32, u32, u32), Vec<SparseVector>> = HashMap::new();
        let mut pages = Vec::new();
        let mut records = Vec::new();

        for r in 2..=w.r_max {
            let rho = r - 1;
            // d_r of every active survivor: corrected chain and coordinates in
            // the target's survivors
            let mut outgoing: BTreeMap<(u32, u32, u32), Vec<Outgoing>> = BTreeMap::new();
            let mut newly_undetermined: Vec<((u32, u32, u32), usize)> = Vec::new();
            let mut reducers: HashMap<(u32, u32, u32), Echelon<Witness>> = HashMap::new();
            for (&(s, t, k), list) in &positions {
                let target = (s + 1, t, k + rho);
                if !w.contains(target.0, target.1, target.2) {
                    for (i, sv) in list.iter().enumerate() {
                        if sv.undetermined.is_none() {
                            newly_undetermined.push(((s, t, k), i));
                        }
                    }
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = reducers.entry(target) {
                    if let std::collections::hash_map::Entry::Vacant(e) = boundaries.entry(target) {
                        e.insert(self.initial_boundaries(target.0, target.1, target.2)?);
                    }
                    let mut red = boundaries[&target].clone();
                    for (l, x) in positions.get(&target).into_iter().flatten().enumerate() {
                        let tag = Witness {
                            chain: IntegralChain::zero(self.integral.modulus()),
                            coords: SparseVector::unit(l as u32),
                        };
                        if red.insert(x.gr.clone(), tag).is_err() {
                            return Err(CoreError::InconsistentComplex(format!(
                                "page {r}: survivors at {target:?} are dependent modulo boundaries"
                            )));
                        }
                    }
                    e.insert(red);
                }
                let red = &reducers[&target];
                let gt = self.graded(target.2)?;
                let target_empty = self.e2(target.0, target.1, target.2)?.dim() == 0;
                let out = outgoing.entry((s, t, k)).or_default();
                for (i, sv) in list.iter().enumerate() {
                    if sv.undetermined.is_some() {
                        continue;
                    }
                    let dc = self.integral.d(s, t, &sv.chain)?;
                    let mut y = self.integral.gr(s + 1, t, &dc, target.2, gt)?;
                    let mut tag = Witness {
                        chain: sv.chain.clone(),
                        coords: SparseVector::zero(),
                    };
                    red.reduce_fully(&mut y, &mut tag);
                    if !y.is_zero() {
                        return Err(CoreError::InconsistentComplex(format!(
                            "page {r}: d_{r} of a class at ({s},{t},{k}) is not a cocycle modulo survivors"
                        )));
                    }
                    tag.coords.scale(p.value() - 1, p);
                    if target_empty && !tag.coords.is_zero() {
                        return Err(CoreError::InconsistentComplex(format!(
                            "page {r}: nonzero d_{r} into the zero group at {target:?}"
                        )));
                    }
                    out.push((i, tag.chain, tag.coords));
                }
            }
            for (pos, i) in newly_undetermined {
                positions.get_mut(&pos).unwrap()[i].undetermined = Some(r);
            }

            // page table before the update
            let mut entries = BTreeMap::new();
            for (&pos, list) in &positions {
                let (s, t, k) = pos;
                let group = self.e2(s, t, k)?;
                let coords = |x: &SparseVector| group.coordinates(x);
                let survivors = list.iter().map(|x| coords(&x.gr)).collect::<Result<Vec<_>>>()?;
                let mut values: Vec<Option<SparseVector>> = vec![None; list.len()];
                if let Some(out) = outgoing.get(&pos) {
                    let target = (s + 1, t, k + rho);
                    let tgroup = self.e2(target.0, target.1, target.2)?;
                    let tlist = positions.get(&target);
                    for (i, _, mu) in out {
                        let mut rep = SparseVector::zero();
                        for (l, c) in mu.iter() {
                            rep.add_scaled(&tlist.expect("nonzero coordinates need survivors")[l as usize].gr, c, p);
                        }
                        values[*i] = Some(tgroup.coordinates(&rep)?);
                    }
                }
                entries.insert(
                    pos,
                    PageEntry {
                        survivors,
                        undetermined: list.iter().map(|x| x.undetermined).collect(),
                        values,
                        killed: killed.get(&pos).cloned().unwrap_or_default(),
                    },
                );
            }
            pages.push(PageTable { r, entries });

            // local elimination at each source: kernel and image
            let mut kernels: HashMap<(u32, u32, u32), Vec<Witness>> = HashMap::new();
            let mut incoming: HashMap<(u32, u32, u32), Vec<Image>> = HashMap::new();
            for (&(s, t, k), out) in &outgoing {
                let target = (s + 1, t, k + rho);
                let tlist = positions.get(&target);
                let mut ech: Echelon<Witness> = Echelon::new(p, tlist.map_or(0, |l| l.len()));
                let mut kernel = Vec::new();
                for (i, chain, mu) in out {
                    let tag = Witness {
                        chain: chain.clone(),
                        coords: SparseVector::unit(*i as u32),
                    };
                    if let Err(tag) = ech.insert(mu.clone(), tag) {
                        kernel.push(tag);
                    }
                }
                kernels.insert((s, t, k), kernel);
                let list = &positions[&(s, t, k)];
                for (row, tag) in ech.rows() {
                    let tlist = tlist.expect("nonzero image needs survivors");
                    let mut gr = SparseVector::zero();
                    for (l, c) in row.iter() {
                        gr.add_scaled(&tlist[l as usize].gr, c, p);
                    }
                    let mut source_rep = SparseVector::zero();
                    for (i, c) in tag.coords.iter() {
                        source_rep.add_scaled(&list[i as usize].gr, c, p);
                    }
                    let mut source_coords = self.e2(s, t, k)?.coordinates(&source_rep)?;
                                        let inv = p.inv(source_coords.leading().map_or(1, |x| x.1));
                    source_coords.scale(inv, p);
                    source_rep.scale(inv, p);
                    let mut scaled_chain = tag.chain.zero_like();
                    scaled_chain.add_scaled(&tag.chain, inv, p);
                    let mut gr_scaled = gr.clone();
                    gr_scaled.scale(inv, p);
                    let source = NovClass {
                        s,
                        t,
                        k,
                        coordinates: source_coords,
                    };
                    let target_class = NovClass {
                        s: target.0,
                        t: target.1,
                        k: target.2,
                        coordinates: self.e2(target.0, target.1, target.2)?.coordinates(&gr_scaled)?,
                    };
                    records.push(DifferentialRecord {
                        r,
                        source,
                        target: target_class,
                        source_rep,
                        target_rep: gr_scaled,
                        witness: scaled_chain,
                    });
                    incoming.entry(target).or_default().push(Image {
                        coords: row.clone(),
                        gr,
                        chain: tag.chain.clone(),
                    });
                }
            }

            // E_{r+1} = kernel / image at each position
            let keys: Vec<_> = positions.keys().copied().collect();
            for pos in keys {
                let list = &positions[&pos];
                let images = incoming.remove(&pos).unwrap_or_default();
                let kernel = kernels.remove(&pos).unwrap_or_default();
                let n = list.len();
                if list.iter().all(|x| x.undetermined.is_none()) {
                    let mut span: Echelon = Echelon::new(p, n);
                    for kv in &kernel {
                        span.insert_plain(kv.coords.clone());
                    }
                    if images.iter().any(|im| !span.contains(&im.coords)) {
                        return Err(CoreError::InconsistentComplex(format!(
                            "page {r}: d_{r} ∘ d_{r} is nonzero at {pos:?}"
                        )));
                    }
                }
                let mut quotient: Echelon = Echelon::new(p, n);
                for im in &images {
                    quotient.insert_plain(im.coords.clone());
                }
                let mut next = Vec::new();
                for kv in &kernel {
                    if quotient.insert_plain(kv.coords.clone()) {
                        next.push(combine(p, list, kv, None));
                    }
                }
                for (i, x) in list.iter().enumerate() {
                    if let Some(since) = x.undetermined {
                        if quotient.insert_plain(SparseVector::unit(i as u32)) {
                            next.push(combine(
                                p,
                                list,
                                &Witness {
                                    chain: x.chain.clone(),
                                    coords: SparseVector::unit(i as u32),
                                },
                                Some(since),
                            ));
                        }
                    }
                }
                if !images.is_empty() {
                    if let std::collections::hash_map::Entry::Vacant(e) = boundaries.entry(pos) {
                        e.insert(self.initial_boundaries(pos.0, pos.1, pos.2)?);
                    }
                    let group = self.e2(pos.0, pos.1, pos.2)?;
                    let b = boundaries.get_mut(&pos).unwrap();
                    for im in images {
                        killed.entry(pos).or_default().push(group.coordinates(&im.gr)?);
                        let _ = b.insert(
                            im.gr,
                            Witness {
                                chain: im.chain,
                                coords: SparseVector::zero(),
                            },
                        );
                    }
                }
                if next.is_empty() {
                    positions.remove(&pos);
                } else {
                    positions.insert(pos, next);
                }
            }
        }

        let mut survivors = Vec::new();
        for (&(s, t, k), list) in &positions {
            let group = self.e2(s, t, k)?;
            for x in list {
                survivors.push(FinalClass {
                    class: NovClass {
                        s,
                        t,
                        k,
                        coordinates: group.coordinates(&x.gr)?,
                    },
                    status: match x.undetermined {
                        Some(r) => ClassStatus::Undetermined(r),
                        None => ClassStatus::PermanentInRange,
                    },
                });
            }
        }
        Ok(AlgNovRun {
            prime: p,
            window: w,
            pages,
            records,
            survivors,
        })
    }

    /// Rechecks a record from scratch: the witness lies in `F^k`, lifts the
    /// source and its differential lies in `F^{k+r-1}` with the stated image.
    pub fn verify_record(&self, rec: &DifferentialRecord) -> Result<()> {
        let (s, t, k) = (rec.source.s, rec.source.t, rec.source.k);
        let kt = k + rec.r - 1;
        let g = self.graded(k)?;
        let gt = self.graded(kt)?;
        if self.integral.gr(s, t, &rec.witness, k, g)? != rec.source_rep {
            return Err(CoreError::InconsistentComplex(format!(
                "witness of d_{} at ({s},{t},{k}) does not lift its source",
                rec.r
            )));
        }
        let dc = self.integral.d(s, t, &rec.witness)?;
        if self.integral.gr(s + 1, t, &dc, kt, gt)? != rec.target_rep {
            return Err(CoreError::InconsistentComplex(format!(
                "witness of d_{} at ({s},{t},{k}) does not hit its target",
                rec.r
            )));
        }
        if g.ext(s, t)?.coordinates(&rec.source_rep)? != rec.source.coordinates
            || gt.ext(s + 1, t)?.coordinates(&rec.target_rep)? != rec.target.coordinates
        {
            return Err(CoreError::InconsistentComplex(format!(
                "record of d_{} at ({s},{t},{k}) names the wrong classes",
                rec.r
            )));
        }
        Ok(())
    }
}

/// The survivor `Σ coords_i x_i` carried by `tag.chain`.
fn combine(p: Prime, list: &[Survivor], tag: &Witness, undetermined: Option<u32>) -> Survivor {
    let mut gr = SparseVector::zero();
    for (i, c) in tag.coords.iter() {
        gr.add_scaled(&list[i as usize].gr, c, p);
    }
    Survivor {
        gr,
        chain: tag.chain.clone(),
        undetermined,
    }
}
