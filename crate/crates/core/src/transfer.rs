//! Motivic bookkeeping and the passage from algebraic Novikov differentials
//! to Adams differentials.
//!
//! An Adams class `z ∈ Ext_{A_*}^{s+k,t+k}` detected by `x` at algebraic
//! Novikov degree `(s, t, k)` has a motivic lift `z̃` of weight `t/2`.
//! The cofiber of `τ` has Adams `E_2` page the algebraic Novikov `E_2` page
//! regraded by `κ: (S, T, K) ↦ (S+K, T+K, T/2)`. Differentials transfer as
//! follows:
//!
//! - `r = 2`: `d_2(z)` is detected by `d_2(x)`, with no range condition;
//! - `r ≥ 3`: `d_r[z] = [w]` with `w` detected by `d_r[x]`, provided
//!   `s < 2p-2` and `r + k ≤ 2p-2` and `z` survives to `E_r`;
//! - a first nonzero `d_r(x)` with `s < 2p-2` forces `z` to support a
//!   nonzero Adams differential on some page `≤ r`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::algnov::{DifferentialRecord, NovClass};
use crate::cess::DetectionRecord;
use crate::cobar::ExtClass;
use crate::error::{CoreError, Result};
use crate::linalg::SparseVector;
use crate::prime::Prime;

/// Motivic weight `(t - k)/2` of the lift of an Adams class with internal
/// degree `t` and filtration `k`.
pub fn motivic_weight(t: u32, k: u32) -> Result<u32> {
    if k > t {
        return Err(CoreError::Filtration(format!("filtration {k} exceeds internal degree {t}")));
    }
    if !(t - k).is_multiple_of(2) {
        return Err(CoreError::Parity(format!("t - k = {t} - {k} is odd")));
    }
    Ok((t - k) / 2)
}

/// Degrees `(s, t, u)` of the motivic Adams spectral sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotivicTridegree {
    pub s: u32,
    pub t: u32,
    pub u: i64,
}

impl fmt::Display for MotivicTridegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.t, self.u)
    }
}

/// `κ(S, T, K) = (S + K, T + K, T/2)`.
pub fn kappa_index(s: u32, t: u32, k: u32) -> Result<MotivicTridegree> {
    if !t.is_multiple_of(2) {
        return Err(CoreError::Parity(format!("algebraic Novikov degree T = {t} is odd")));
    }
    Ok(MotivicTridegree {
        s: s + k,
        t: t + k,
        u: (t / 2) as i64,
    })
}

/// `κ^{-1}(s, t, u) = (s + 2u - t, 2u, t - 2u)`.
pub fn kappa_inverse(d: MotivicTridegree) -> Result<(u32, u32, u32)> {
    let MotivicTridegree { s, t, u } = d;
    if u < 0 || 2 * u > t as i64 {
        return Err(CoreError::Parity(format!("weight {u} is outside 0 ≤ 2u ≤ t = {t}")));
    }
    let k = t - 2 * u as u32;
    if k > s {
        return Err(CoreError::Parity(format!("t - 2u = {k} exceeds s = {s}")));
    }
    Ok((s - k, 2 * u as u32, k))
}

/// The class `τ^n z̃` of the motivic `E_2` page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotivicClass {
    pub tau_power: u32,
    pub detection: DetectionRecord,
}

impl MotivicClass {
    pub fn lift(detection: DetectionRecord) -> Self {
        MotivicClass {
            tau_power: 0,
            detection,
        }
    }

    pub fn times_tau(&self, n: u32) -> Self {
        MotivicClass {
            tau_power: self.tau_power + n,
            detection: self.detection.clone(),
        }
    }

    pub fn tridegree(&self) -> Result<MotivicTridegree> {
        let z = &self.detection.z;
        let u = motivic_weight(z.t, self.detection.k)?;
        Ok(MotivicTridegree {
            s: z.s,
            t: z.t,
            u: u as i64 - self.tau_power as i64,
        })
    }
}

/// Image of `ψ`, which sends `τ` to zero: the cofiber-of-`τ` class, named by
/// its algebraic Novikov class.
pub fn psi_reduce(c: &MotivicClass) -> Option<NovClass> {
    (c.tau_power == 0).then(|| c.detection.x.clone())
}

/// Image of `φ`, which inverts `τ`.
pub fn phi_invert(c: &MotivicClass) -> ExtClass {
    c.detection.z.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    InRange,
    OutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardVerdict {
    pub s: u32,
    pub k: u32,
    pub r: u32,
    pub p: Prime,
    pub verdict: Verdict,
    /// The inequalities that failed.
    pub reasons: Vec<String>,
}

impl GuardVerdict {
    pub fn in_range(&self) -> bool {
        self.verdict == Verdict::InRange
    }
}

/// Checks `s < 2p-2` and `r + k ≤ 2p-2`.
pub fn range_guard(s: u32, k: u32, r: u32, p: Prime) -> GuardVerdict {
    let bound = 2 * p.value() - 2;
    let mut reasons = Vec::new();
    if s >= bound {
        reasons.push(format!("s < 2p-2 fails: s = {s}, 2p-2 = {bound}"));
    }
    if r + k > bound {
        reasons.push(format!("r + k ≤ 2p-2 fails: r + k = {}, 2p-2 = {bound}", r + k));
    }
    GuardVerdict {
        s,
        k,
        r,
        p,
        verdict: if reasons.is_empty() { Verdict::InRange } else { Verdict::OutOfRange },
        reasons,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "T1.2")]
    T12,
    #[serde(rename = "T1.3")]
    T13,
    #[serde(rename = "T1.5")]
    T15,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T12 => "T1.2",
            Theorem::T13 => "T1.3",
            Theorem::T15 => "T1.5",
        })
    }
}

/// What a transfer record asserts about the Adams spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdamsStatement {
    /// `d_r[z]` is nonzero, lands in `target`, and is detected by `y`.
    Differential {
        r: u32,
        source: (u32, u32),
        target: (u32, u32),
        y: NovClass,
    },
    /// The part of `d_r[z]` in filtration `filtration` vanishes. Says nothing
    /// about higher filtrations.
    LeadingTermVanishes { r: u32, source: (u32, u32), filtration: u32 },
    /// `z` supports a nonzero differential on some page `≤ max_page`.
    NotPermanent { source: (u32, u32), max_page: u32 },
    Refused { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferRecord {
    pub theorem: Theorem,
    pub z: String,
    pub source: DifferentialRecord,
    pub statement: AdamsStatement,
    pub guard: GuardVerdict,
    /// Hypotheses taken on trust rather than checked.
    pub assumptions: Vec<String>,
    /// `z` has components in more than one filtration.
    pub ambiguous: bool,
}

/// Scalar `λ` with `a = λ b`, if any.
fn proportional(a: &SparseVector, b: &SparseVector, p: Prime) -> Option<u32> {
    let (i, lead_b) = b.leading()?;
    let lam = p.mul(a.get(i), p.inv(lead_b));
    (lam != 0 && *a == b.scaled(lam, p)).then_some(lam)
}

/// The differential `d_r(x)` scaled to the detecting class of `detection`.
fn matched_target(detection: &DetectionRecord, diff: &DifferentialRecord, p: Prime) -> Result<NovClass> {
    let x = &detection.x;
    let src = &diff.source;
    if (x.s, x.t, x.k) != (src.s, src.t, src.k) {
        return Err(CoreError::Mismatch(format!(
            "{} is detected at ({},{},{}), the differential starts at ({},{},{})",
            detection.z.name(),
            x.s,
            x.t,
            x.k,
            src.s,
            src.t,
            src.k
        )));
    }
    let target = &diff.target;
    if (target.s, target.t, target.k) != (src.s + 1, src.t, src.k + diff.r - 1) {
        return Err(CoreError::Mismatch(format!("d_{} record has the wrong target degree", diff.r)));
    }
    let lam = proportional(&x.coordinates, &src.coordinates, p).ok_or_else(|| {
        CoreError::Mismatch(format!("{} is not detected by {}", detection.z.name(), src.name()))
    })?;
    Ok(NovClass {
        coordinates: target.coordinates.scaled(lam, p),
        ..target.clone()
    })
}

/// Converts `d_r(x) = y` into a statement about the Adams differential on
/// the class `z` detected by `x`.
pub fn transfer(detection: &DetectionRecord, diff: &DifferentialRecord, p: Prime) -> Result<TransferRecord> {
    let y = matched_target(detection, diff, p)?;
    let (s, t, k, r) = (detection.x.s, detection.x.t, detection.k, diff.r);
    let guard = range_guard(s, k, r, p);
    let source = (detection.z.s, detection.z.t);
    let mut assumptions = Vec::new();
    let theorem = if r == 2 { Theorem::T12 } else { Theorem::T13 };
    if r >= 3 {
        assumptions.push(format!("{} survives to the Adams E_{r} page", detection.z.name()));
    }
    let statement = if r >= 3 && !guard.in_range() {
        AdamsStatement::Refused {
            reason: guard.reasons.join("; "),
        }
    } else if y.coordinates.is_zero() {
        AdamsStatement::LeadingTermVanishes {
            r,
            source,
            filtration: k + r - 1,
        }
    } else {
        AdamsStatement::Differential {
            r,
            source,
            target: (s + k + r, t + k + r - 1),
            y,
        }
    };
    Ok(TransferRecord {
        theorem,
        z: detection.z.name(),
        source: diff.clone(),
        statement,
        guard,
        assumptions,
        ambiguous: detection.is_ambiguous(),
    })
}

/// A certificate that `z` is not a permanent cycle, from the first nonzero
/// algebraic Novikov differential on its detecting class. Returns `None`
/// when there is no such differential.
pub fn nonpermanence(
    detection: &DetectionRecord,
    first_nonzero: Option<&DifferentialRecord>,
    p: Prime,
) -> Result<Option<TransferRecord>> {
    let Some(diff) = first_nonzero else {
        return Ok(None);
    };
    let y = matched_target(detection, diff, p)?;
    if y.coordinates.is_zero() {
        return Ok(None);
    }
    let s = detection.x.s;
    let guard = range_guard(s, detection.k, diff.r, p);
    let bound = 2 * p.value() - 2;
    let statement = if s >= bound {
        AdamsStatement::Refused {
            reason: format!("s < 2p-2 fails: s = {s}, 2p-2 = {bound}"),
        }
    } else {
        AdamsStatement::NotPermanent {
            source: (detection.z.s, detection.z.t),
            max_page: diff.r,
        }
    };
    Ok(Some(TransferRecord {
        theorem: Theorem::T15,
        z: detection.z.name(),
        source: diff.clone(),
        statement,
        guard,
        assumptions: vec![format!(
            "d_{} is the first nonzero differential on the detecting class",
            diff.r
        )],
        ambiguous: detection.is_ambiguous(),
    }))
}
