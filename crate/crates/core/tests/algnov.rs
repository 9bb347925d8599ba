use adams_core::algnov::{AlgNovEngine, AlgNovRun, AlgNovWindow, ClassStatus, DrValue, NovClass};
use adams_core::hopf::PolynomialMonomial;
use adams_core::linalg::SparseVector;
use adams_core::{CoreError, Prime};

mod common;
use common::binomial;

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn run(window: AlgNovWindow) -> (AlgNovEngine, AlgNovRun) {
    let engine = AlgNovEngine::new(p3(), window).unwrap();
    let run = engine.run().unwrap();
    (engine, run)
}

fn status(run: &AlgNovRun, s: u32, t: u32, k: u32) -> Vec<ClassStatus> {
    run.survivors
        .iter()
        .filter(|c| (c.class.s, c.class.t, c.class.k) == (s, t, k))
        .map(|c| c.status)
        .collect()
}

#[test]
fn e2_examples() {
    let engine = AlgNovEngine::new(p3(), AlgNovWindow::new(2, 8, 2, 2)).unwrap();
    assert_eq!(engine.e2(0, 0, 0).unwrap().dim(), 1);
    assert_eq!(engine.e2(1, 4, 0).unwrap().dim(), 1);
    // v_1 is not invariant: d(v_1) = v_0 [t_1]
    assert_eq!(engine.e2(0, 4, 1).unwrap().dim(), 0);
}

#[test]
fn d2_of_h1_is_v0_b0() {
    let (engine, run) = run(AlgNovWindow::new(4, 17, 3, 4));
    let h1: Vec<_> = run.records.iter().filter(|r| (r.source.s, r.source.t, r.source.k) == (1, 12, 0)).collect();
    assert_eq!(h1.len(), 1);
    let rec = h1[0];
    assert_eq!(rec.r, 2);
    assert_eq!((rec.target.s, rec.target.t, rec.target.k), (2, 12, 1));

    // source is c[t_1^3], the only word in its slice
    let g0 = engine.graded(0).unwrap();
    assert_eq!(g0.dim(1, 12), 1);
    let c = rec.source_rep.iter().next().unwrap().1;

    // oracle: d(c[t_1^3]) = -c Σ C(3,i) [t_1^i|t_1^{3-i}] = v_0 · c·(-Σ C(3,i)/3 [t_1^i|t_1^{3-i}])
    let g1 = engine.graded(1).unwrap();
    let alg = engine.polynomial_algebra();
    let v0 = g1.coefficients().id(&[1]).unwrap();
    let mut expected = SparseVector::zero();
    for i in 1..3u32 {
        let word = [
            v0,
            alg.id(&PolynomialMonomial::t(1, i)).unwrap(),
            alg.id(&PolynomialMonomial::t(1, 3 - i)).unwrap(),
        ];
        let coef = (3 - (binomial(3, i) / 3 % 3) as u32) % 3 * c % 3;
        expected.add_scaled(&SparseVector::unit(g1.index_of(2, 12, &word).unwrap()), coef, p3());
    }
    let group = g1.ext(2, 12).unwrap();
    assert_eq!(group.dim(), 1);
    assert_eq!(group.coordinates(&expected).unwrap(), rec.target.coordinates);
    assert!(!rec.target.coordinates.is_zero());
    engine.verify_record(rec).unwrap();
}

#[test]
fn every_record_verifies() {
    let (engine, run) = run(AlgNovWindow::new(4, 17, 3, 4));
    assert!(!run.records.is_empty());
    for rec in &run.records {
        engine.verify_record(rec).unwrap();
    }
    let mut forged = run.records[0].clone();
    forged.target.coordinates.scale(2, p3());
    assert!(matches!(engine.verify_record(&forged), Err(CoreError::InconsistentComplex(_))));
}

#[test]
fn b0_has_no_d5() {
    let (_, run) = run(AlgNovWindow::new(3, 12, 4, 5));
    let b0 = NovClass::basis(2, 12, 0, 0);
    for r in 2..=5 {
        assert_eq!(run.differential(r, &b0).unwrap(), DrValue::Zero, "d_{r}(b_0)");
    }
}

#[test]
fn unit_and_h0_are_permanent() {
    let (_, run) = run(AlgNovWindow::new(3, 8, 3, 3));
    assert_eq!(status(&run, 0, 0, 0), vec![ClassStatus::PermanentInRange]);
    assert_eq!(status(&run, 1, 4, 0), vec![ClassStatus::PermanentInRange]);
    for r in 2..=3 {
        assert_eq!(run.differential(r, &NovClass::basis(0, 0, 0, 0)).unwrap(), DrValue::Zero);
    }
}

#[test]
fn h1_differential_is_recorded_once() {
    let (_, run) = run(AlgNovWindow::new(4, 16, 3, 3));
    let count = run
        .records
        .iter()
        .filter(|r| r.r == 2 && (r.source.s, r.source.t, r.source.k) == (1, 12, 0))
        .count();
    assert_eq!(count, 1);
}

#[test]
fn pages_are_consistent() {
    let w = AlgNovWindow::new(4, 17, 3, 4);
    let (_, run) = run(w);
    assert_eq!(run.pages.iter().map(|pg| pg.r).collect::<Vec<_>>(), (2..=w.r_max).collect::<Vec<_>>());
    for r in 2..=w.r_max {
        let mut total = 0;
        for (&pos, entry) in &run.page(r).unwrap().entries {
            let next = run.dim(r + 1, pos.0, pos.1, pos.2).unwrap();
            assert!(next <= entry.dim(), "page {} grows at {pos:?}", r + 1);
            total += entry.dim() - next;
            assert_eq!(entry.values.len(), entry.dim());
            assert_eq!(entry.undetermined.len(), entry.dim());
        }
        // each nonzero differential removes one source and one target
        assert_eq!(total % 2, 0, "page {r}");
    }
}

#[test]
fn edge_classes_are_undetermined() {
    let w = AlgNovWindow::new(4, 17, 3, 4);
    let (_, run) = run(w);
    for c in &run.survivors {
        let (s, k) = (c.class.s, c.class.k);
        match c.status {
            ClassStatus::PermanentInRange => {
                assert!(s < w.s_max && k + w.r_max - 1 <= w.k_max, "{} cannot be certified", c.class.name());
            }
            ClassStatus::Undetermined(r) => assert!((2..=w.r_max).contains(&r)),
        }
        if k == w.k_max && s < w.s_max {
            assert_eq!(c.status, ClassStatus::Undetermined(2), "{}", c.class.name());
        }
    }
}

#[test]
fn window_is_validated() {
    assert!(matches!(
        AlgNovEngine::new(p3(), AlgNovWindow::new(2, 8, 2, 1)),
        Err(CoreError::OutOfRange(_))
    ));
    let mut w = AlgNovWindow::new(2, 8, 3, 2);
    w.precision = Some(3);
    assert!(matches!(AlgNovEngine::new(p3(), w), Err(CoreError::Precision { .. })));
}
