use adams_core::cess::{c_set, decompose, detect};
use adams_core::linalg::SparseVector;
use adams_core::session::Session;
use adams_core::Prime;
use proptest::prelude::*;

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

#[test]
fn congruence_set_examples() {
    let p = p3();
    assert_eq!(c_set(2, 12, p).members, vec![0]);
    assert_eq!(c_set(1, 1, p).members, vec![1]);
    assert_eq!(c_set(3, 5, p).members, vec![1]);
    assert_eq!(c_set(2, 5, p).members, vec![1]);
    assert!(c_set(0, 3, p).members.is_empty());
}

#[test]
fn low_decompositions() {
    let session = Session::build(p3(), 3, 8, 3).unwrap();
    let cases = [((0, 0), vec![(0, 1)]), ((1, 1), vec![(1, 1)]), ((1, 4), vec![(0, 1)])];
    for ((s, t), summands) in cases {
        let dec = decompose(&session, s, t).unwrap();
        assert_eq!(dec.summands.into_iter().collect::<Vec<_>>(), summands, "({s},{t})");
        assert_eq!(dec.adams_dim, 1);
    }
    // i = 1 is allowed at (2,5) but both sides vanish there
    let dec = decompose(&session, 2, 5).unwrap();
    assert_eq!(dec.adams_dim, 0);
    assert!(dec.summands.is_empty());
}

#[test]
fn detection_examples() {
    let session = Session::build(p3(), 2, 4, 2).unwrap();
    let det = session.detector().unwrap();
    let a0 = session.adams().ext(1, 1).unwrap().classes()[0].clone();
    let rec = detect(&det, &a0).unwrap();
    assert_eq!((rec.k, rec.x.s, rec.x.t, rec.x.k), (1, 0, 0, 1));
    // x = v_0, the unique class of Ext^{0,0}(I/I^2)
    assert_eq!(session.algnov(1).unwrap().ext(0, 0).unwrap().dim(), 1);
    assert!(!rec.x.coordinates.is_zero());
    assert!(!rec.is_ambiguous());

    let h0 = session.adams().ext(1, 4).unwrap().classes()[0].clone();
    let rec = detect(&det, &h0).unwrap();
    assert_eq!((rec.k, rec.x.s, rec.x.t, rec.x.k), (0, 1, 4, 0));

    let mut zero = a0.clone();
    zero.representative = SparseVector::zero();
    assert!(detect(&det, &zero).is_err());
}

#[test]
fn weight_parity_on_detected_classes() {
    let session = Session::build(p3(), 4, 16, 4).unwrap();
    let det = session.detector().unwrap();
    for s in 0..=4 {
        for t in 0..=16 {
            for z in session.adams().ext(s, t).unwrap().classes() {
                let rec = detect(&det, z).unwrap();
                assert_eq!((t - rec.k) % 2, 0, "{}", z.name());
                assert!(c_set(s, t, p3()).contains(rec.k));
            }
        }
    }
}

proptest! {
    #[test]
    fn congruence_set_matches_definition(s in 0u32..20, t in 0u32..60, p in prop_oneof![Just(3u32), Just(5u32), Just(7u32)]) {
        let q = 2 * (p - 1);
        let expected: Vec<u32> = (0..=s).filter(|&i| i <= t && (t - i) % q == 0).collect();
        prop_assert_eq!(c_set(s, t, Prime::new(p).unwrap()).members, expected);
    }
}
