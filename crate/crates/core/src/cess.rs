//! The splitting of the Adams `E_2` page at odd primes,
//!
//! ```text
//! Ext_{A_*}^{s,t} ≅ ⊕_{i ∈ C_{s,t}} Ext_{P_*}^{s-i,t-i}(F_p, I^i/I^{i+1}),
//! C_{s,t} = { i : i ≡ t mod q, 0 ≤ i ≤ s, i ≤ t },
//! ```
//!
//! and detection of Adams classes by classes over `P_*`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::algnov::NovClass;
use crate::cobar::{Detector, ExtClass};
use crate::error::{CoreError, Result};
use crate::prime::Prime;
use crate::session::Session;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSet {
    pub s: u32,
    pub t: u32,
    pub p: Prime,
    pub members: Vec<u32>,
}

impl CongruenceSet {
    pub fn contains(&self, i: u32) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

pub fn c_set(s: u32, t: u32, p: Prime) -> CongruenceSet {
    let q = p.q();
    let members = (0..=s.min(t)).filter(|&i| i % q == t % q).collect();
    CongruenceSet { s, t, p, members }
}

/// Both sides of the splitting at one bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub s: u32,
    pub t: u32,
    /// `i ↦ dim Ext_{P_*}^{s-i,t-i}(F_p, I^i/I^{i+1})`, nonzero entries only.
    pub summands: BTreeMap<u32, usize>,
    pub adams_dim: usize,
}

impl Decomposition {
    pub fn total(&self) -> usize {
        self.summands.values().sum()
    }
}

/// Computes both sides at `(s, t)` and fails if they disagree or a summand
/// appears outside `C_{s,t}`.
pub fn decompose(session: &Session, s: u32, t: u32) -> Result<Decomposition> {
    let p = session.prime();
    let adams_dim = session.adams().ext(s, t)?.dim();
    let mut summands = BTreeMap::new();
    for i in 0..=s.min(t) {
        let d = session.algnov(i)?.ext(s - i, t - i)?.dim();
        if d > 0 {
            summands.insert(i, d);
        }
    }
    let dec = Decomposition {
        s,
        t,
        summands,
        adams_dim,
    };
    let c = c_set(s, t, p);
    if let Some(&i) = dec.summands.keys().find(|&&i| !c.contains(i)) {
        return Err(CoreError::Audit(format!("({s},{t}): summand {i} lies outside C_{{s,t}} = {:?}", c.members)));
    }
    if dec.total() != adams_dim {
        return Err(CoreError::Audit(format!(
            "({s},{t}): summands {:?} add up to {}, Ext_A has dimension {adams_dim}",
            dec.summands,
            dec.total()
        )));
    }
    Ok(dec)
}

/// An Adams class, its filtration and its leading term over `P_*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub z: ExtClass,
    pub k: u32,
    /// Every filtration in which `z` has a nonzero component.
    pub profile: Vec<u32>,
    /// The class at `(s - k, t - k, k)` detecting `z`.
    pub x: NovClass,
}

impl DetectionRecord {
    pub fn is_ambiguous(&self) -> bool {
        self.profile.len() > 1
    }
}

pub fn detect(detector: &Detector<'_>, z: &ExtClass) -> Result<DetectionRecord> {
    if z.representative.is_zero() {
        return Err(CoreError::Filtration(format!("{} has a zero representative", z.name())));
    }
    let (f, lt) = detector.detect_class(z)?;
    Ok(DetectionRecord {
        z: z.clone(),
        k: f.k,
        profile: f.profile,
        x: NovClass {
            s: lt.s,
            t: lt.t,
            k: lt.k,
            coordinates: lt.coordinates,
        },
    })
}
