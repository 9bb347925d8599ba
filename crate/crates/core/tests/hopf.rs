use adams_core::cobar::{check_coaction, check_coassociativity, check_counit, Coefficients};
use adams_core::hopf::{
    coproduct, gr_coaction, i_adic_weight, Bidegree, BpElement, BpStructure, GradedVElement, MotivicMonomial,
    PolynomialAlgebra, PolynomialMonomial, SteenrodAlgebra, SteenrodMonomial,
};
use adams_core::linalg::Valuation;
use adams_core::{CoreError, Prime};
use proptest::prelude::*;

fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

#[test]
fn dual_steenrod_is_coassociative_with_counit() {
    for (p, t_max) in [(3, 40), (5, 48)] {
        let alg = SteenrodAlgebra::new(prime(p), t_max);
        check_coassociativity(&alg, t_max).unwrap();
        check_counit(&alg).unwrap();
    }
}

#[test]
fn polynomial_part_is_coassociative_and_coacts() {
    for (p, t_max) in [(3, 40), (5, 48)] {
        let bp = BpStructure::new(prime(p), t_max).unwrap();
        let alg = PolynomialAlgebra::new(&bp);
        check_coassociativity(&alg, t_max).unwrap();
        check_coaction(&Coefficients::trivial(), &alg).unwrap();
        for k in 1..=4 {
            check_coaction(&Coefficients::weight(&bp, &alg, k).unwrap(), &alg).unwrap();
        }
    }
}

#[test]
fn right_unit_examples() {
    let bp = BpStructure::new(prime(3), 12).unwrap();
    let g = bp.ngens();
    assert_eq!(bp.eta_right(&BpElement::integer(g, 1)).unwrap(), BpElement::integer(g, 1));
    assert_eq!(bp.eta_right(&BpElement::integer(g, 3)).unwrap(), BpElement::integer(g, 3));
    let v1 = BpElement::v(g, 1);
    assert_eq!(bp.eta_right(&v1).unwrap(), v1.add(&BpElement::t(g, 1).scale(3)));
}

#[test]
fn gr_coaction_examples() {
    let bp = BpStructure::new(prime(3), 12).unwrap();
    let v0 = GradedVElement::monomial(&[1]);
    let v1 = GradedVElement::monomial(&[0, 1]);
    assert_eq!(gr_coaction(&bp, &v0).unwrap(), vec![(v0.clone(), PolynomialMonomial::unit())]);
    assert_eq!(
        gr_coaction(&bp, &v1).unwrap(),
        vec![(v1, PolynomialMonomial::unit()), (v0, PolynomialMonomial::t(1, 1))]
    );
}

#[test]
fn i_adic_weight_examples() {
    let p = prime(3);
    let g = 2;
    assert_eq!(i_adic_weight(&BpElement::v(g, 1).scale(9), p).unwrap(), Valuation::Finite(3));
    assert_eq!(i_adic_weight(&BpElement::t(g, 1), p).unwrap(), Valuation::Finite(0));
    let mixed = BpElement::t(g, 1).scale(3).add(&BpElement::v(g, 1).mul(&BpElement::t(g, 2), p));
    assert_eq!(i_adic_weight(&mixed, p).unwrap(), Valuation::Finite(1));
}

#[test]
fn coproduct_examples() {
    let p = prime(3);
    let one = SteenrodMonomial::unit();
    let tau0 = SteenrodMonomial::tau(0);
    let t1 = SteenrodMonomial::t_power(1, 1);
    let t1sq = SteenrodMonomial::t_power(1, 2);
    assert_eq!(
        coproduct(&tau0, p, 20).unwrap(),
        vec![(one.clone(), tau0.clone(), 1), (tau0, one.clone(), 1)]
    );
    assert_eq!(coproduct(&t1, p, 20).unwrap(), vec![(one.clone(), t1.clone(), 1), (t1.clone(), one.clone(), 1)]);
    assert_eq!(
        coproduct(&t1sq, p, 20).unwrap(),
        vec![(one.clone(), t1sq.clone(), 1), (t1.clone(), t1, 2), (t1sq, one, 1)]
    );
    // τ_1 ↦ τ_1 ⊗ 1 + ξ_1 ⊗ τ_0 + 1 ⊗ τ_1
    let tau1 = coproduct(&SteenrodMonomial::tau(1), p, 20).unwrap();
    assert_eq!(tau1.len(), 3);
    assert!(tau1.contains(&(SteenrodMonomial::t_power(1, 1), SteenrodMonomial::tau(0), 1)));
}

#[test]
fn degree_cap_is_reported() {
    assert!(matches!(
        coproduct(&SteenrodMonomial::t_power(1, 3), prime(3), 7),
        Err(CoreError::DegreeCap { .. })
    ));
}

#[test]
fn motivic_degrees() {
    let p = prime(3);
    assert_eq!(SteenrodMonomial::t_power(1, 1).bidegree(p), Bidegree { t: 4, u: 2 });
    assert_eq!(SteenrodMonomial::tau(0).bidegree(p), Bidegree { t: 1, u: 0 });
    let tau_t1 = MotivicMonomial::new(1, SteenrodMonomial::t_power(1, 1));
    assert_eq!(tau_t1.bidegree(p), Bidegree { t: 4, u: 1 });
}

fn binomial_mod(n: u32, k: u32, p: u32) -> u32 {
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * u128::from(n - i) / u128::from(i + 1);
    }
    (c % u128::from(p)) as u32
}

proptest! {
    #[test]
    fn powers_of_t1_have_binomial_coproducts(p in prop_oneof![Just(3u32), Just(5u32)], n in 0u32..12) {
        let pr = prime(p);
        let got = coproduct(&SteenrodMonomial::t_power(1, n), pr, 2 * (p - 1) * n).unwrap();
        let expected: Vec<_> = (0..=n)
            .filter(|&i| binomial_mod(n, i, p) != 0)
            .map(|i| (SteenrodMonomial::t_power(1, i), SteenrodMonomial::t_power(1, n - i), binomial_mod(n, i, p)))
            .collect();
        let mut got_sorted = got;
        got_sorted.sort();
        let mut exp_sorted = expected;
        exp_sorted.sort();
        prop_assert_eq!(got_sorted, exp_sorted);
    }

    #[test]
    fn bidegree_is_additive(a in 0u32..4, b in 0u32..4, ta in any::<bool>(), tb in any::<bool>()) {
        let p = prime(3);
        let x = SteenrodMonomial::new(if ta { &[0] } else { &[] }, &[a]);
        let y = SteenrodMonomial::new(if tb { &[1] } else { &[] }, &[0, b]);
        let (_, xy) = x.mul(&y).unwrap();
        prop_assert_eq!(xy.bidegree(p), x.bidegree(p) + y.bidegree(p));
        prop_assert_eq!(xy.degree(p), x.degree(p) + y.degree(p));
    }
}
