//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, UnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use adams_core::algnov::{AlgNovEngine, AlgNovWindow, ClassStatus};
use adams_core::cess::{decompose, detect};
use adams_core::cobar::{
    check_coaction, check_coassociativity, check_counit, CobarComplex, CochainSlice, Coefficients, ComplexTag, IntegralComplex,
};
use adams_core::hopf::PolynomialMonomial;
use adams_core::linalg::{Modulus, SparseVector};
use adams_core::session::Session;
use adams_core::transfer::{
    kappa_index, kappa_inverse, motivic_weight, range_guard, transfer, AdamsStatement, MotivicClass, Theorem, Verdict,
};
use adams_core::Prime;
use adams_workbench::cache::Cache;
use tempfile::TempDir;

#[path = "../../core/tests/common/mod.rs"]
mod common;

const S_MAX: u32 = 8;
const T_MAX: u32 = 26;
const K_MAX: u32 = 6;

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn decomposition_audit() {
    let session = Session::build(p3(), S_MAX, T_MAX, S_MAX).unwrap();
    for s in 0..=S_MAX {
        for t in 0..=T_MAX {
            let dec = decompose(&session, s, t).unwrap();
            let direct = session.adams().ext(s, t).unwrap().dim();
            assert_eq!(dec.adams_dim, direct, "({s},{t})");
            assert_eq!(dec.total(), direct, "({s},{t}): {:?}", dec.summands);
        }
    }
}

fn oracle_equivalence() {
    let session = Session::build(p3(), S_MAX, 14, 0).unwrap();
    common::oracle::check_adams_complex(session.adams(), session.steenrod(), S_MAX, 14).unwrap();
}

fn structure_suites() {
    let session = Session::build(p3(), S_MAX, T_MAX, K_MAX).unwrap();
    check_coassociativity(session.steenrod().as_ref(), T_MAX).unwrap();
    check_coassociativity(session.poly().as_ref(), T_MAX).unwrap();
    check_counit(session.steenrod()).unwrap();
    let mut slices = 0;
    for cx in session.complexes() {
        if let ComplexTag::AlgNov(_) = cx.tag() {
            check_coaction(cx.coefficients(), session.poly().as_ref()).unwrap();
        }
        for t in 0..=T_MAX {
            for s in 0..S_MAX {
                cx.check_d_squared(s, t).unwrap();
                slices += 1;
            }
        }
    }
    assert_eq!(slices, (K_MAX as usize + 2) * S_MAX as usize * (T_MAX as usize + 1));

    let modulus = Modulus::new(p3(), K_MAX + 6).unwrap();
    let ic = IntegralComplex::build(session.bp().clone(), session.poly().clone(), modulus, S_MAX, T_MAX).unwrap();
    for t in 0..=T_MAX {
        for s in 0..S_MAX {
            ic.check_d_squared(s, t).unwrap();
        }
    }
}

fn kappa_regrading() {
    let mut seen = HashSet::new();
    for s in 0..=S_MAX {
        for t in (0..=T_MAX).step_by(2) {
            for k in 0..=K_MAX {
                let d = kappa_index(s, t, k).unwrap();
                assert!(seen.insert(d), "κ is not injective at ({s},{t},{k})");
                assert_eq!(kappa_inverse(d).unwrap(), (s, t, k));
                assert_eq!((d.s, d.t, d.u), (s + k, t + k, i64::from(t / 2)));
                for r in 2..=6 {
                    let e = kappa_index(s + 1, t, k + r - 1).unwrap();
                    assert_eq!((e.s, e.t, e.u), (d.s + r, d.t + r - 1, d.u), "d_{r} from ({s},{t},{k})");
                }
            }
        }
    }
}

fn weight_formula() {
    let session = Session::build(p3(), S_MAX, T_MAX, S_MAX).unwrap();
    let det = session.detector().unwrap();
    let mut count = 0;
    for s in 0..=S_MAX {
        for t in 0..=T_MAX {
            for z in session.adams().ext(s, t).unwrap().classes() {
                let rec = detect(&det, z).unwrap();
                assert_eq!((t - rec.k) % 2, 0, "{}", z.name());
                let u = motivic_weight(t, rec.k).unwrap();
                assert_eq!(u, (t - rec.k) / 2);
                let d = MotivicClass::lift(rec).tridegree().unwrap();
                assert_eq!((d.s, d.t, d.u), (s, t, i64::from(u)));
                count += 1;
            }
        }
    }
    assert!(count > 0);
}

fn algnov_engine() {
    let p = p3();
    let engine = AlgNovEngine::new(p, AlgNovWindow::new(4, 17, 3, 4)).unwrap();
    let run = engine.run().unwrap();
    let recs: Vec<_> = run.records.iter().filter(|r| (r.source.s, r.source.t, r.source.k) == (1, 12, 0)).collect();
    assert_eq!(recs.len(), 1);
    let rec = recs[0];
    assert_eq!((rec.r, rec.target.s, rec.target.t, rec.target.k), (2, 2, 12, 1));
    assert!(!rec.target.coordinates.is_zero());
    engine.verify_record(rec).unwrap();

    // v_0 · b_0 with b_0 = -([t_1|t_1^2] + [t_1^2|t_1]), scaled like the source c[t_1^3]
    let c = rec.source_rep.iter().next().unwrap().1;
    let g1 = engine.graded(1).unwrap();
    let alg = engine.polynomial_algebra();
    let v0 = g1.coefficients().id(&[1]).unwrap();
    let mut expected = SparseVector::zero();
    for i in 1..3u32 {
        let word = [v0, alg.id(&PolynomialMonomial::t(1, i)).unwrap(), alg.id(&PolynomialMonomial::t(1, 3 - i)).unwrap()];
        let coef = (3 - (common::binomial(3, i) / 3 % 3) as u32) % 3 * c % 3;
        expected.add_scaled(&SparseVector::unit(g1.index_of(2, 12, &word).unwrap()), coef, p);
    }
    assert_eq!(g1.ext(2, 12).unwrap().coordinates(&expected).unwrap(), rec.target.coordinates);

    let session = Session::build(p, 4, 17, 3).unwrap();
    let det = session.detector().unwrap();
    let h1 = session.adams().ext(1, 12).unwrap().classes()[0].clone();
    let tr = transfer(&detect(&det, &h1).unwrap(), rec, p).unwrap();
    assert_eq!(tr.theorem, Theorem::T12);
    let AdamsStatement::Differential { r: 2, target, .. } = tr.statement else { panic!("{:?}", tr.statement) };
    assert_eq!(target, (3, 13));
    assert_eq!(session.adams().ext(3, 13).unwrap().dim(), 1);

    for (s, t) in [(0, 0), (1, 4)] {
        let status: Vec<_> =
            run.survivors.iter().filter(|c| (c.class.s, c.class.t, c.class.k) == (s, t, 0)).map(|c| c.status).collect();
        assert_eq!(status, vec![ClassStatus::PermanentInRange], "({s},{t},0)");
    }
}

fn guard_regressions() {
    for p in [3u32, 5] {
        let pr = Prime::new(p).unwrap();
        for s in 0..=200 {
            assert_eq!(range_guard(s, 0, 2 * p - 1, pr).verdict, Verdict::OutOfRange, "p = {p}, s = {s}");
        }
        for s in 0..=4 * p {
            for k in 0..=2 * p - 2 {
                for r in 2..=2 * p - 2 {
                    let ok = range_guard(s, k, r, pr).in_range();
                    assert_eq!(ok, s < 2 * p - 2 && r + k <= 2 * p - 2, "p = {p}, ({s},{k},{r})");
                    if ok {
                        assert!(s == 0 || range_guard(s - 1, k, r, pr).in_range());
                        assert!(k == 0 || range_guard(s, k - 1, r, pr).in_range());
                        assert!(r == 2 || range_guard(s, k, r - 1, pr).in_range());
                    }
                }
            }
        }
    }
}

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn sorted(cx: &CobarComplex) -> Vec<CochainSlice> {
    let mut v: Vec<CochainSlice> = cx.slices().cloned().collect();
    v.sort_by_key(|x| (x.s, x.t));
    v
}

/// Runs the full pipeline on the default window, writing interchange files into `out`.
fn full_run(cache: &Path, out: &Path) {
    let bin = env!("CARGO_BIN_EXE_adams-workbench");
    let algnov = out.join("algnov.json");
    let runs: [(Vec<&str>, &str); 5] = [
        (vec!["ext", "adams"], "adams.json"),
        (vec!["ext", "ctau"], "ctau.json"),
        (vec!["algnov"], "algnov.json"),
        (vec!["transfer", algnov.to_str().unwrap(), "--nonpermanence"], "transfer.json"),
        (vec!["audit"], "audit.json"),
    ];
    for (args, file) in runs {
        let status = Command::new(bin)
            .env_remove("ADAMS_WORKBENCH_CACHE")
            .args(&args)
            .arg("--cache-dir")
            .arg(cache)
            .arg("--out")
            .arg(out.join(file))
            .status()
            .unwrap();
        assert!(status.success(), "{args:?}");
    }
}

fn round_trip_and_determinism() {
    let p = p3();
    let dirs: Vec<TempDir> = (0..2).map(|_| TempDir::new().unwrap()).collect();
    for dir in &dirs {
        let session = Session::build(p, S_MAX, T_MAX, K_MAX).unwrap();
        let cache = Cache::open(dir.path(), p, false).unwrap();
        for cx in session.complexes() {
            cache.store_complex(cx).unwrap();
            let back = cache
                .load_complex(cx.tag(), session.poly().clone(), cx.coefficients().clone(), S_MAX, T_MAX)
                .unwrap()
                .unwrap();
            assert_eq!(sorted(&back), sorted(cx), "{}", cx.tag());
        }
        let adams = cache
            .load_complex(ComplexTag::Adams, session.steenrod().clone(), Coefficients::trivial(), S_MAX, T_MAX)
            .unwrap()
            .unwrap();
        assert_eq!(sorted(&adams), sorted(session.adams()));
    }
    assert_eq!(tree(dirs[0].path()), tree(dirs[1].path()));

    let runs: Vec<(TempDir, TempDir)> = (0..2).map(|_| (TempDir::new().unwrap(), TempDir::new().unwrap())).collect();
    for (cache, out) in &runs {
        full_run(cache.path(), out.path());
    }
    let outputs = tree(runs[0].1.path());
    assert_eq!(outputs.len(), 5);
    assert_eq!(outputs, tree(runs[1].1.path()));
    assert_eq!(tree(runs[0].0.path()), tree(runs[1].0.path()));
}

fn criterion(n: u32, name: &str, f: impl FnOnce() + UnwindSafe) -> bool {
    let start = Instant::now();
    let ok = catch_unwind(f).is_ok();
    println!("{} {n}. {name} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    ok
}

fn main() -> ExitCode {
    let results = [
        criterion(1, "decomposition dimension audit, s <= 8, t <= 26", decomposition_audit),
        criterion(2, "Ext over A_* matches the dense oracle, s <= 8, t <= 14", oracle_equivalence),
        criterion(3, "d^2 = 0, coassociativity, counit and coaction on the default window", structure_suites),
        criterion(4, "kappa bijection and intertwining for 2 <= r <= 6", kappa_regrading),
        criterion(5, "detections have t - k even and weight (t - k)/2", weight_formula),
        criterion(6, "d_2(h_1) = v_0 b_0, its transfer to (3,13), permanence of 1 and h_0", algnov_engine),
        criterion(7, "range guard regressions and monotonicity", guard_regressions),
        criterion(8, "bit-exact cache round trip and deterministic full runs", round_trip_and_determinism),
    ];
    if results.iter().all(|&ok| ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
