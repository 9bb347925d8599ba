//! The workbench commands. Each produces a [`Chart`]; writing it out and
//! choosing the exit code is left to the binary.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;
use std::sync::Arc;

use adams_core::algnov::{AlgNovEngine, ClassStatus, DifferentialRecord};
use adams_core::cess::{c_set, decompose, detect};
use adams_core::cobar::{
    check_coaction, check_coassociativity, check_counit, CobarComplex, Coalgebra, Coefficients, ComplexTag,
};
use adams_core::error::CoreError;
use adams_core::hopf::{BpStructure, PolynomialAlgebra, SteenrodAlgebra};
use adams_core::linalg::SparseVector;
use adams_core::names::standard_name;
use adams_core::session::Session;
use adams_core::transfer::{kappa_index, kappa_inverse, motivic_weight, nonpermanence, transfer, TransferRecord};

use crate::cache::Cache;
use crate::chart::{Chart, ChartHeader, ChartRecord, RecordKind, SsTag};
use crate::config::WorkbenchConfig;
use crate::error::{Result, WorkbenchError};

/// A validated configuration with its cache.
pub struct Context {
    cfg: WorkbenchConfig,
    cache: Option<Cache>,
    warnings: Vec<String>,
}

impl Context {
    pub fn new(cfg: WorkbenchConfig, rebuild: bool) -> Result<Self> {
        let warnings = cfg.validate()?;
        let cache = match &cfg.cache_dir {
            Some(dir) => Some(Cache::open(dir, cfg.prime()?, rebuild)?),
            None => None,
        };
        Ok(Context { cfg, cache, warnings })
    }

    pub fn config(&self) -> &WorkbenchConfig {
        &self.cfg
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn complex(
        &self,
        tag: ComplexTag,
        alg: Arc<dyn Coalgebra>,
        coeffs: Coefficients,
        s_max: u32,
        t_max: u32,
    ) -> Result<CobarComplex> {
        match &self.cache {
            Some(cache) => cache.load_or_build(tag, alg, coeffs, s_max, t_max),
            None => Ok(CobarComplex::build(tag, alg, coeffs, s_max, t_max)?),
        }
    }

    /// The `A_*` complex and the weight complexes `k ≤ k_max`, through
    /// `(s_max, t_max)`, loaded from the cache when possible.
    pub fn session(&self, s_max: u32, t_max: u32, k_max: u32) -> Result<Session> {
        Session::assemble(self.cfg.prime()?, s_max, t_max, k_max, |steenrod, bp, poly| {
            let adams = self.complex(ComplexTag::Adams, steenrod, Coefficients::trivial(), s_max, t_max)?;
            let algnov = (0..=k_max)
                .map(|k| {
                    let coeffs = Coefficients::weight(bp, &poly, k)?;
                    self.complex(ComplexTag::AlgNov(k), poly.clone(), coeffs, s_max, t_max)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((adams, algnov))
        })
    }

    pub fn engine(&self) -> Result<AlgNovEngine> {
        let w = self.cfg.window();
        let bp = Arc::new(BpStructure::new(self.cfg.prime()?, w.t_max)?);
        let poly = Arc::new(PolynomialAlgebra::new(&bp));
        let graded = (0..=w.k_max)
            .map(|k| {
                let coeffs = Coefficients::weight(&bp, &poly, k)?;
                self.complex(ComplexTag::AlgNov(k), poly.clone(), coeffs, w.s_max, w.t_max)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgNovEngine::from_parts(bp, poly, graded, w)?)
    }

    fn header(&self) -> ChartHeader {
        ChartHeader::new(&self.cfg)
    }
}

/// Lower corner of the emitted range; records below it are skipped. A floor
/// above the window gives a header-only chart.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Floor {
    pub s: u32,
    pub t: u32,
}

impl Floor {
    fn admits(&self, s: u32, t: u32) -> bool {
        s >= self.s && t >= self.t
    }

    fn excludes_window(&self, cfg: &WorkbenchConfig) -> bool {
        self.s > cfg.s_max || self.t > cfg.t_max
    }
}

/// Which `E_2` page `ext` lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtTarget {
    Adams,
    AlgNov(u32),
    /// The algebraic Novikov `E_2` pages for `k ≤ k_max`, regraded by `κ`.
    Ctau,
}

impl FromStr for ExtTarget {
    type Err = WorkbenchError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adams" => Ok(ExtTarget::Adams),
            "ctau" => Ok(ExtTarget::Ctau),
            _ => match s.parse::<ComplexTag>() {
                Ok(ComplexTag::AlgNov(k)) => Ok(ExtTarget::AlgNov(k)),
                _ => Err(WorkbenchError::Config(format!("expected adams, algnov-k<k> or ctau, got {s:?}"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPayload {
    pub index: usize,
    pub block: u32,
    pub representative: String,
    pub cochain: SparseVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtauPayload {
    /// Algebraic Novikov degree `(s, t, k)` of the class.
    pub source: (u32, u32, u32),
    pub index: usize,
    pub representative: String,
}

fn push_classes(chart: &mut Chart, complex: &CobarComplex, floor: Floor) -> Result<()> {
    let p = complex.prime();
    let tag = complex.tag();
    let (ss, k) = match tag {
        ComplexTag::Adams => (SsTag::Adams, None),
        ComplexTag::AlgNov(k) => (SsTag::Algnov, Some(k)),
        ComplexTag::Integral => unreachable!("ext lists F_p complexes only"),
    };
    for s in floor.s..=complex.s_max() {
        for t in floor.t..=complex.t_max() {
            let group = complex.ext(s, t)?;
            let standard = if group.dim() == 1 { standard_name(p, tag, s, t) } else { None };
            for class in group.classes() {
                let mut names = vec![class.name()];
                names.extend(standard.clone().filter(|n| !n.is_empty()));
                let mut degree = vec![s as i64, t as i64];
                degree.extend(k.map(i64::from));
                let payload = ClassPayload {
                    index: class.index,
                    block: class.block,
                    representative: complex.format_cochain(s, t, &class.representative)?,
                    cochain: class.representative.clone(),
                };
                chart.push(ChartRecord::new(RecordKind::Class, ss, degree, names, &payload)?);
            }
        }
    }
    Ok(())
}

/// One class record per basis class of the chosen `E_2` page in the window.
pub fn cmd_ext(ctx: &Context, which: ExtTarget, floor: Floor) -> Result<Chart> {
    let cfg = ctx.config();
    let p = cfg.prime()?;
    let mut chart = Chart::new(ctx.header());
    if floor.excludes_window(cfg) {
        return Ok(chart);
    }
    let (s_max, t_max) = (cfg.s_max, cfg.t_max);
    match which {
        ExtTarget::Adams => {
            let alg = Arc::new(SteenrodAlgebra::new(p, t_max));
            let c = ctx.complex(ComplexTag::Adams, alg, Coefficients::trivial(), s_max, t_max)?;
            push_classes(&mut chart, &c, floor)?;
        }
        ExtTarget::AlgNov(k) => {
            let bp = BpStructure::new(p, t_max)?;
            let poly = Arc::new(PolynomialAlgebra::new(&bp));
            let coeffs = Coefficients::weight(&bp, &poly, k)?;
            let c = ctx.complex(ComplexTag::AlgNov(k), poly, coeffs, s_max, t_max)?;
            push_classes(&mut chart, &c, floor)?;
        }
        ExtTarget::Ctau => {
            let session = ctx.session(s_max, t_max, cfg.k_max)?;
            for (k, c) in session.algnov_all().iter().enumerate() {
                let k = k as u32;
                for s in floor.s..=s_max {
                    for t in floor.t..=t_max {
                        let group = c.ext(s, t)?;
                        if group.dim() == 0 {
                            continue;
                        }
                        let tri = kappa_index(s, t, k)?;
                        for class in group.classes() {
                            let payload = CtauPayload {
                                source: (s, t, k),
                                index: class.index,
                                representative: c.format_cochain(s, t, &class.representative)?,
                            };
                            let degree = vec![tri.s as i64, tri.t as i64, tri.u];
                            chart.push(ChartRecord::new(RecordKind::Class, SsTag::Ctau, degree, vec![class.name()], &payload)?);
                        }
                    }
                }
            }
        }
    }
    Ok(chart)
}

/// Payload of an algebraic Novikov class record: a page entry, or a class
/// surviving the last computed page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "entry", rename_all = "kebab-case")]
pub enum AlgNovEntry {
    Page {
        page: u32,
        dim: usize,
        /// `E_2` coordinates of a basis of `E_r` at this position.
        survivors: Vec<SparseVector>,
        /// Page on which a survivor's target left the window, if it did.
        undetermined: Vec<Option<u32>>,
    },
    Final {
        index: usize,
        coordinates: SparseVector,
        status: ClassStatus,
    },
}

/// Runs the algebraic Novikov spectral sequence over the window. For each
/// page the chart has its entries followed by its differentials; the classes
/// left after `E_{r_max}` come last.
pub fn cmd_algnov(ctx: &Context, floor: Floor) -> Result<Chart> {
    let cfg = ctx.config();
    let mut chart = Chart::new(ctx.header());
    if floor.excludes_window(cfg) {
        return Ok(chart);
    }
    let run = ctx.engine()?.run()?;
    for page in &run.pages {
        for (&(s, t, k), entry) in &page.entries {
            if entry.dim() == 0 || !floor.admits(s, t) {
                continue;
            }
            let payload = AlgNovEntry::Page {
                page: page.r,
                dim: entry.dim(),
                survivors: entry.survivors.clone(),
                undetermined: entry.undetermined.clone(),
            };
            let degree = vec![s as i64, t as i64, k as i64];
            chart.push(ChartRecord::new(RecordKind::Class, SsTag::Algnov, degree, Vec::new(), &payload)?);
        }
        for rec in run.records.iter().filter(|r| r.r == page.r) {
            let src = &rec.source;
            if !floor.admits(src.s, src.t) {
                continue;
            }
            let degree = vec![src.s as i64, src.t as i64, src.k as i64];
            let names = vec![src.name(), rec.target.name()];
            chart.push(ChartRecord::new(RecordKind::Differential, SsTag::Algnov, degree, names, rec)?);
        }
    }
    let mut seen: BTreeMap<(u32, u32, u32), usize> = BTreeMap::new();
    for fc in &run.survivors {
        let c = &fc.class;
        let index = seen.entry((c.s, c.t, c.k)).or_insert(0);
        if floor.admits(c.s, c.t) {
            let payload = AlgNovEntry::Final {
                index: *index,
                coordinates: c.coordinates.clone(),
                status: fc.status,
            };
            let degree = vec![c.s as i64, c.t as i64, c.k as i64];
            chart.push(ChartRecord::new(RecordKind::Class, SsTag::Algnov, degree, vec![c.name()], &payload)?);
        }
        *index += 1;
    }
    Ok(chart)
}

/// Result of `transfer`: the chart plus the records that could not be
/// matched to an Adams class.
pub struct TransferOutput {
    pub chart: Chart,
    pub skipped: Vec<String>,
}

/// Converts the differential records of an algebraic Novikov chart into
/// statements about Adams differentials. With `nonpermanence`, each
/// conversion is followed by the corresponding nonpermanence certificate.
pub fn cmd_transfer(ctx: &Context, input: &Chart, with_nonpermanence: bool) -> Result<TransferOutput> {
    let cfg = ctx.config();
    let h = &input.header;
    if h.prime != cfg.prime {
        return Err(WorkbenchError::Config(format!(
            "chart was computed at p = {}, the configuration has p = {}",
            h.prime, cfg.prime
        )));
    }
    let p = cfg.prime()?;
    let mut chart = Chart::new(h.clone());
    let mut skipped = Vec::new();
    let diffs: Vec<&ChartRecord> = input
        .records_of(RecordKind::Differential)
        .filter(|r| r.ss == SsTag::Algnov)
        .collect();
    if diffs.is_empty() {
        return Ok(TransferOutput { chart, skipped });
    }
    let diffs: Vec<DifferentialRecord> = diffs.into_iter().map(|r| r.payload_as()).collect::<Result<_>>()?;
    // Adams degrees of the sources, capped at the chart window
    let in_chart = |d: &&DifferentialRecord| d.source.k <= h.k_max && d.source.s <= h.s_max && d.source.t <= h.t_max;
    let s_need = diffs.iter().filter(in_chart).map(|d| d.source.s + d.source.k).max().unwrap_or(0);
    let t_need = diffs.iter().filter(in_chart).map(|d| d.source.t + d.source.k).max().unwrap_or(0);
    // every filtration of a class at Adams degree s is at most s
    let session = ctx.session(s_need, t_need, s_need)?;
    let detector = session.detector()?;
    for diff in diffs {
        let src = &diff.source;
        let (s, t) = (src.s + src.k, src.t + src.k);
        if s > session.s_max() || t > session.t_max() || src.k > session.k_max() {
            skipped.push(format!("{}: Adams degree ({s},{t}) is outside the session", src.name()));
            continue;
        }
        let group = session.adams().ext(s, t)?;
        let mut matched = None;
        for z in group.classes() {
            let d = detect(&detector, z)?;
            if d.k != src.k {
                continue;
            }
            match transfer(&d, &diff, p) {
                Ok(tr) => {
                    matched = Some((d, tr));
                    break;
                }
                Err(CoreError::Mismatch(_)) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        // TODO: match sources detecting a combination of several basis classes
        let Some((detection, tr)) = matched else {
            skipped.push(format!("{}: no basis class of Ext_A at ({s},{t}) is detected by it", src.name()));
            continue;
        };
        chart.push(transfer_record(&tr, s, t)?);
        if with_nonpermanence {
            if let Some(np) = nonpermanence(&detection, Some(&diff), p)? {
                chart.push(transfer_record(&np, s, t)?);
            }
        }
    }
    Ok(TransferOutput { chart, skipped })
}

fn transfer_record(tr: &TransferRecord, s: u32, t: u32) -> Result<ChartRecord> {
    ChartRecord::new(
        RecordKind::Transfer,
        SsTag::Adams,
        vec![s as i64, t as i64],
        vec![tr.z.clone(), tr.theorem.to_string()],
        tr,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub check: String,
    pub pass: bool,
    pub detail: String,
    /// For the decomposition check: `i ↦ dim` of the summands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summands: Option<BTreeMap<u32, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adams_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub congruence_set: Option<Vec<u32>>,
}

pub struct AuditOutput {
    pub chart: Chart,
    /// `check: detail` for every failed check.
    pub failures: Vec<String>,
}

impl AuditOutput {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Auditor {
    chart: Chart,
    failures: Vec<String>,
}

impl Auditor {
    fn entry(&mut self, ss: SsTag, degree: Vec<i64>, entry: AuditEntry) -> Result<()> {
        if !entry.pass {
            self.failures.push(format!("{}: {}", entry.check, entry.detail));
        }
        let names = vec![entry.check.clone()];
        self.chart.push(ChartRecord::new(RecordKind::Audit, ss, degree, names, &entry)?);
        Ok(())
    }

    /// Records the outcome of a check. Failures of the checked property
    /// become failed entries; other errors abort the audit.
    fn check(&mut self, ss: SsTag, degree: Vec<i64>, check: &str, ok: &str, outcome: adams_core::error::Result<()>) -> Result<()> {
        let (pass, detail) = match outcome {
            Ok(()) => (true, ok.to_string()),
            Err(
                e @ (CoreError::Audit(_)
                | CoreError::InconsistentComplex(_)
                | CoreError::Parity(_)
                | CoreError::Filtration(_)
                | CoreError::Mismatch(_)),
            ) => (false, e.to_string()),
            Err(e) => return Err(e.into()),
        };
        self.entry(
            ss,
            degree,
            AuditEntry {
                check: check.into(),
                pass,
                detail,
                summands: None,
                adams_dim: None,
                congruence_set: None,
            },
        )
    }
}

/// Runs every consistency suite over the window: cache integrity, the
/// splitting of `Ext_A` into weight summands, `d² = 0` (including the `BP_*BP`
/// complex), coassociativity and counit, the `κ` regrading and the weight
/// parity of every detection.
pub fn cmd_audit(ctx: &Context) -> Result<AuditOutput> {
    let cfg = ctx.config();
    let p = cfg.prime()?;
    let mut a = Auditor {
        chart: Chart::new(ctx.header()),
        failures: Vec::new(),
    };
    if let Some(cache) = ctx.cache() {
        match cache.verify_all() {
            Ok(_) => a.check(SsTag::Adams, vec![], "cache-integrity", "slice checksums verified", Ok(()))?,
            Err(WorkbenchError::CacheCorrupt { path, reason }) => {
                a.entry(
                    SsTag::Adams,
                    vec![],
                    AuditEntry {
                        check: "cache-integrity".into(),
                        pass: false,
                        detail: format!("{}: {reason}", path.display()),
                        summands: None,
                        adams_dim: None,
                        congruence_set: None,
                    },
                )?;
                return Ok(AuditOutput {
                    chart: a.chart,
                    failures: a.failures,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let (s_max, t_max) = (cfg.s_max, cfg.t_max);
    // the splitting needs every weight up to s
    let k_top = cfg.k_max.max(s_max);
    let session = ctx.session(s_max, t_max, k_top)?;

    a.check(SsTag::Adams, vec![], "coassociativity", "A_*", check_coassociativity(session.steenrod().as_ref(), t_max))?;
    a.check(SsTag::Adams, vec![], "counit", "A_*", check_counit(session.steenrod()))?;
    a.check(SsTag::Algnov, vec![], "coassociativity", "P_*", check_coassociativity(session.poly().as_ref(), t_max))?;
    for (k, c) in session.algnov_all().iter().enumerate() {
        let outcome = check_coaction(c.coefficients(), session.poly().as_ref());
        a.check(SsTag::Algnov, vec![k as i64], "coaction", &format!("I^{k}/I^{}", k + 1), outcome)?;
    }

    for c in session.complexes() {
        let outcome = (0..=s_max).try_for_each(|s| (0..=t_max).try_for_each(|t| c.check_d_squared(s, t)));
        let ss = if c.tag() == ComplexTag::Adams { SsTag::Adams } else { SsTag::Algnov };
        a.check(ss, vec![], "d-squared", &c.tag().to_string(), outcome)?;
    }
    let engine = ctx.engine()?;
    let bp = engine.integral();
    let outcome = (0..s_max).try_for_each(|s| (0..=t_max).try_for_each(|t| bp.check_d_squared(s, t)));
    a.check(SsTag::Algnov, vec![], "d-squared", &format!("bp mod p^{}", bp.precision()), outcome)?;

    let outcome = kappa_suite(&session, s_max, t_max, k_top);
    a.check(SsTag::Ctau, vec![], "kappa", "bijective and intertwines d_r for 2 ≤ r ≤ 6", outcome)?;

    for s in 0..=s_max {
        for t in 0..=t_max {
            let degree = vec![s as i64, t as i64];
            let entry = match decompose(&session, s, t) {
                Ok(dec) => AuditEntry {
                    check: "decomposition".into(),
                    pass: true,
                    detail: "ok".into(),
                    summands: Some(dec.summands),
                    adams_dim: Some(dec.adams_dim),
                    congruence_set: Some(c_set(s, t, p).members),
                },
                Err(e @ CoreError::Audit(_)) => AuditEntry {
                    check: "decomposition".into(),
                    pass: false,
                    detail: e.to_string(),
                    summands: None,
                    adams_dim: None,
                    congruence_set: Some(c_set(s, t, p).members),
                },
                Err(e) => return Err(e.into()),
            };
            a.entry(SsTag::Cess, degree, entry)?;
        }
    }

    let detector = session.detector()?;
    let mut count = 0;
    let mut ambiguous = 0;
    let mut parity = Ok(());
    for s in 0..=s_max {
        for t in 0..=t_max {
            for z in session.adams().ext(s, t)?.classes() {
                let d = detect(&detector, z)?;
                count += 1;
                if d.is_ambiguous() {
                    ambiguous += 1;
                }
                if parity.is_ok() {
                    parity = motivic_weight(z.t, d.k).map(|_| ());
                }
                let names = vec![z.name(), d.x.name()];
                a.chart.push(ChartRecord::new(RecordKind::Detection, SsTag::Cess, vec![s as i64, t as i64], names, &d)?);
            }
        }
    }
    let detail = format!("{count} detections, {ambiguous} ambiguous");
    a.check(SsTag::Ctau, vec![], "weight-parity", &detail, parity)?;

    Ok(AuditOutput {
        chart: a.chart,
        failures: a.failures,
    })
}

/// `κ` is injective on the nonzero positions of the window, `κ^{-1}` undoes
/// it, and it sends the degree of `d_r` to that of an Adams `d_r`.
fn kappa_suite(session: &Session, s_max: u32, t_max: u32, k_max: u32) -> adams_core::error::Result<()> {
    let mut images = HashSet::new();
    for k in 0..=k_max {
        let c = session.algnov(k)?;
        for s in 0..=s_max {
            for t in 0..=t_max {
                if c.dim(s, t) == 0 {
                    continue;
                }
                let tri = kappa_index(s, t, k)?;
                if kappa_inverse(tri)? != (s, t, k) {
                    return Err(CoreError::Audit(format!("κ^-1 κ({s},{t},{k}) = {:?}", kappa_inverse(tri)?)));
                }
                if !images.insert(tri) {
                    return Err(CoreError::Audit(format!("κ is not injective at ({s},{t},{k})")));
                }
                for r in 2..=6 {
                    let target = kappa_index(s + 1, t, k + r - 1)?;
                    if (target.s, target.t, target.u) != (tri.s + r, tri.t + r - 1, tri.u) {
                        return Err(CoreError::Audit(format!("κ does not carry d_{r} out of ({s},{t},{k}) to an Adams d_{r}")));
                    }
                }
            }
        }
    }
    Ok(())
}
