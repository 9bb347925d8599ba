use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use adams_core::cobar::{adams_complex, algnov_complex, Coefficients, CobarComplex, CochainSlice, ComplexTag};
use adams_core::hopf::{BpStructure, PolynomialAlgebra, SteenrodAlgebra};
use adams_core::Prime;
use adams_workbench::cache::Cache;
use tempfile::TempDir;

fn prime() -> Prime {
    Prime::new(3).unwrap()
}

fn sorted(cx: &CobarComplex) -> Vec<CochainSlice> {
    let mut v: Vec<CochainSlice> = cx.slices().cloned().collect();
    v.sort_by_key(|x| (x.s, x.t));
    v
}

/// Every file under `dir`, keyed by relative path.
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

#[test]
fn adams_round_trip() {
    let dir = TempDir::new().unwrap();
    let cache = Cache::open(dir.path(), prime(), false).unwrap();
    let alg = Arc::new(SteenrodAlgebra::new(prime(), 16));
    assert!(cache.load_complex(ComplexTag::Adams, alg.clone(), Coefficients::trivial(), 4, 16).unwrap().is_none());

    let cx = adams_complex(prime(), 4, 16).unwrap();
    cache.store_complex(&cx).unwrap();
    let back = cache.load_complex(ComplexTag::Adams, alg.clone(), Coefficients::trivial(), 4, 16).unwrap().unwrap();
    assert_eq!(sorted(&back), sorted(&cx));
    assert_eq!(back.ext_dim(2, 12).unwrap(), cx.ext_dim(2, 12).unwrap());

    let small = cache.load_complex(ComplexTag::Adams, alg, Coefficients::trivial(), 2, 9).unwrap().unwrap();
    assert_eq!(sorted(&small), sorted(&adams_complex(prime(), 2, 9).unwrap()));
    assert!(!dir.path().read_dir().unwrap().any(|e| e.unwrap().path().join("write.lock").exists()));
}

#[test]
fn algnov_round_trip() {
    let dir = TempDir::new().unwrap();
    let cache = Cache::open(dir.path(), prime(), false).unwrap();
    let bp = BpStructure::new(prime(), 12).unwrap();
    let alg = Arc::new(PolynomialAlgebra::new(&bp));
    let cx = algnov_complex(&bp, alg.clone(), 2, 3, 12).unwrap();
    cache.store_complex(&cx).unwrap();
    let coeffs = cx.coefficients().clone();
    let back = cache.load_complex(ComplexTag::AlgNov(2), alg.clone(), coeffs.clone(), 3, 12).unwrap().unwrap();
    assert_eq!(sorted(&back), sorted(&cx));
    // a larger window than was stored is a miss
    assert!(cache.load_complex(ComplexTag::AlgNov(2), alg, coeffs, 4, 12).unwrap().is_none());
}

#[test]
fn files_are_bit_exact_across_caches() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let cache = Cache::open(dir.path(), prime(), false).unwrap();
        cache.store_complex(&adams_complex(prime(), 3, 14).unwrap()).unwrap();
    }
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert!(ta.len() > 10);
    assert_eq!(ta, tb);
    let cache = Cache::open(a.path(), prime(), false).unwrap();
    assert_eq!(cache.verify_all().unwrap(), ta.keys().filter(|k| k.extension().is_some_and(|e| e == "slice")).count());
}

fn run(args: &[&str], cache: &Path) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_adams-workbench"))
        .env_remove("ADAMS_WORKBENCH_CACHE")
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn runs_from_empty_caches_agree() {
    let window = ["--smax", "3", "--tmax", "14", "--kmax", "2", "--rmax", "3"];
    let commands: [&[&str]; 4] = [&["ext", "adams"], &["ext", "ctau"], &["algnov"], &["audit"]];
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for cmd in commands {
        let args: Vec<&str> = cmd.iter().chain(&window).copied().collect();
        let first = run(&args, a.path());
        assert_eq!(first, run(&args, b.path()), "{cmd:?}");
        assert_eq!(first, run(&args, a.path()), "{cmd:?} with a warm cache");
    }

    let input = a.path().join("chart.json");
    std::fs::write(&input, run(&[&["algnov"][..], &window].concat(), a.path())).unwrap();
    let path = input.to_str().unwrap();
    let args: Vec<&str> = [&["transfer", path][..], &window].concat();
    assert_eq!(run(&args, a.path()), run(&args, b.path()));
    assert_eq!(tree(a.path()).len() - 1, tree(b.path()).len());
}
