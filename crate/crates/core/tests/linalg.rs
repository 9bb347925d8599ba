use adams_core::linalg::{
    kernel_basis, p_valuation, rank_of, rref, solve, subquotient_basis, Modulus, SparseMatrix, SparseVector,
    TruncatedInteger, Valuation,
};
use adams_core::Prime;
use proptest::prelude::*;

mod common;
use common::dense_rank;

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn dense(p: Prime, rows: &[&[u32]]) -> SparseMatrix {
    SparseMatrix::from_dense(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

#[test]
fn rref_examples() {
    let p = p3();
    let id = rref(p, &SparseMatrix::identity(2));
    assert_eq!((id.rank, id.pivots.clone()), (2, vec![0, 1]));
    assert_eq!(rref(p, &SparseMatrix::zero(3, 4)).rank, 0);
    let dep = rref(p, &dense(p, &[&[1, 2], &[2, 4]]));
    assert_eq!(dep.rank, 1);
    assert_eq!(dep.reduced.rows, vec![SparseVector::from_dense(p, &[1, 2])]);
}

#[test]
fn kernel_examples() {
    let p = p3();
    assert!(kernel_basis(p, &SparseMatrix::identity(3)).is_empty());
    assert_eq!(kernel_basis(p, &SparseMatrix::zero(2, 2)), vec![SparseVector::unit(0), SparseVector::unit(1)]);
    assert_eq!(kernel_basis(p, &dense(p, &[&[1, 1]])), vec![SparseVector::from_dense(p, &[1, 2])]);
}

#[test]
fn subquotient_examples() {
    let p = p3();
    let (e1, e2) = (SparseVector::unit(0), SparseVector::unit(1));
    let q = subquotient_basis(p, 2, &[e1.clone(), e2.clone()], std::slice::from_ref(&e1)).unwrap();
    assert_eq!(q, vec![e2.clone()]);
    assert!(subquotient_basis(p, 2, &[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap().is_empty());
    let mut sum = e1.clone();
    sum.add(&e2, p);
    assert_eq!(subquotient_basis(p, 2, &[sum, e2], &[]).unwrap().len(), 2);
}

#[test]
fn valuation_examples() {
    let m = Modulus::new(p3(), 4).unwrap();
    assert_eq!(p_valuation(TruncatedInteger::new(12, m)), Valuation::Finite(1));
    assert_eq!(p_valuation(TruncatedInteger::new(1, m)), Valuation::Finite(0));
    assert_eq!(p_valuation(TruncatedInteger::new(81, m)), Valuation::Infinite);
    assert_eq!(p_valuation(TruncatedInteger::new(-9, m)), Valuation::Finite(2));
}

fn matrix(p: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(0..p, c), r))
}

fn prime_and_matrix() -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
    prop_oneof![Just(3u32), Just(5u32)].prop_flat_map(|p| (Just(p), matrix(p)))
}

proptest! {
    #[test]
    fn rank_matches_dense_oracle((p, m) in prime_and_matrix()) {
        let prime = Prime::new(p).unwrap();
        let sm = SparseMatrix::from_dense(prime, &m);
        prop_assert_eq!(rref(prime, &sm).rank, dense_rank(p, m.clone()));
        prop_assert_eq!(rank_of(prime, sm.ncols, sm.rows.clone()), dense_rank(p, m));
    }

    #[test]
    fn rref_is_idempotent_and_deterministic((p, m) in prime_and_matrix()) {
        let prime = Prime::new(p).unwrap();
        let sm = SparseMatrix::from_dense(prime, &m);
        let once = rref(prime, &sm);
        let twice = rref(prime, &once.reduced);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once, rref(prime, &sm));
    }

    #[test]
    fn rank_plus_nullity((p, m) in prime_and_matrix()) {
        let prime = Prime::new(p).unwrap();
        let sm = SparseMatrix::from_dense(prime, &m);
        let ker = kernel_basis(prime, &sm);
        prop_assert_eq!(rref(prime, &sm).rank + ker.len(), sm.ncols);
        for v in &ker {
            prop_assert!(sm.apply(v, prime).is_zero());
        }
        prop_assert_eq!(rank_of(prime, sm.ncols, ker.clone()), ker.len());
    }

    #[test]
    fn solve_recovers_a_combination((p, m) in prime_and_matrix(), seed in prop::collection::vec(0u32..5, 7)) {
        let prime = Prime::new(p).unwrap();
        let nrows = m.len();
        let columns: Vec<SparseVector> = SparseMatrix::from_dense(prime, &m).transpose().rows;
        let x: Vec<u32> = seed.iter().take(columns.len()).map(|&c| c % p).collect();
        let mut rhs = SparseVector::zero();
        for (j, &c) in x.iter().enumerate() {
            rhs.add_scaled(&columns[j], c, prime);
        }
        let sol = solve(prime, nrows, &columns, &rhs).expect("rhs is in the span");
        let mut back = SparseVector::zero();
        for (j, c) in sol.iter() {
            back.add_scaled(&columns[j as usize], c, prime);
        }
        prop_assert_eq!(back, rhs);
    }

    #[test]
    fn truncated_arithmetic_matches_integers(a in -10_000i128..10_000, b in -10_000i128..10_000, n in 1u32..8) {
        let m = Modulus::new(p3(), n).unwrap();
        let (x, y) = (TruncatedInteger::new(a, m), TruncatedInteger::new(b, m));
        prop_assert_eq!(m.add(x.value(), y.value()), TruncatedInteger::new(a + b, m).value());
        prop_assert_eq!(m.mul(x.value(), y.value()), TruncatedInteger::new(a * b, m).value());
        let expected = if a.rem_euclid(3i128.pow(n)) == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite((0..).find(|&e| a % 3i128.pow(e + 1) != 0).unwrap())
        };
        prop_assert_eq!(p_valuation(x), expected);
    }
}
