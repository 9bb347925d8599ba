//! Structural checks on coalgebras and comodules.
//!
//! With `Δ(x) = x ⊗ 1 + 1 ⊗ x + Δ̄(x)`, coassociativity is equivalent to
//! `(Δ̄ ⊗ 1)Δ̄ = (1 ⊗ Δ̄)Δ̄`, and for a coaction `ψ(c) = c ⊗ 1 + ψ̄(c)` to
//! `(ψ̄ ⊗ 1)ψ̄ = (1 ⊗ Δ̄)ψ̄`.

use std::collections::BTreeMap;

use super::complex::{Coalgebra, Coefficients};
use crate::error::{CoreError, Result};
use crate::hopf::steenrod::{coproduct, SteenrodAlgebra};
use crate::prime::Prime;

type Triple = BTreeMap<(u32, u32, u32), u32>;

fn accumulate(p: Prime, acc: &mut Triple, key: (u32, u32, u32), c: u32) {
    let e = acc.entry(key).or_insert(0);
    *e = p.add(*e, c);
    if *e == 0 {
        acc.remove(&key);
    }
}

/// Checks reduced coassociativity for every basis element of degree `≤ t_max`.
pub fn check_coassociativity(alg: &dyn Coalgebra, t_max: u32) -> Result<()> {
    let p = alg.prime();
    for d in 0..=t_max.min(alg.t_max()) {
        for x in alg.ids_of_degree(d) {
            let mut left = Triple::new();
            let mut right = Triple::new();
            for &(a, b, c) in alg.reduced_coproduct(x) {
                for &(a1, a2, c2) in alg.reduced_coproduct(a) {
                    accumulate(p, &mut left, (a1, a2, b), p.mul(c, c2));
                }
                for &(b1, b2, c2) in alg.reduced_coproduct(b) {
                    accumulate(p, &mut right, (a, b1, b2), p.mul(c, c2));
                }
            }
            if left != right {
                return Err(CoreError::Audit(format!("coassociativity fails on {}", alg.letter_name(x))));
            }
        }
    }
    Ok(())
}

/// Checks that the unit parts of the full Milnor coproduct are `m ⊗ 1` and
/// `1 ⊗ m`, so that the reduced coproduct determines the full one.
pub fn check_counit(alg: &SteenrodAlgebra) -> Result<()> {
    let p = alg.prime();
    for id in 0..alg.len() as u32 {
        let m = alg.monomial(id);
        let full = coproduct(m, p, alg.t_max())?;
        let mut units: Vec<_> = full.iter().filter(|(l, r, _)| l.is_unit() || r.is_unit()).collect();
        units.sort();
        let ok = if m.is_unit() {
            units.len() == 1 && units[0].2 == 1
        } else {
            units.len() == 2
                && units.iter().all(|(l, r, c)| *c == 1 && ((l.is_unit() && r == m) || (r.is_unit() && l == m)))
        };
        if !ok {
            return Err(CoreError::Audit(format!("counit fails on {m}")));
        }
    }
    Ok(())
}

/// Checks coassociativity of the reduced coaction of `coeffs` over `alg`.
pub fn check_coaction(coeffs: &Coefficients, alg: &dyn Coalgebra) -> Result<()> {
    let p = alg.prime();
    for c in 0..coeffs.len() as u32 {
        let mut left = Triple::new();
        let mut right = Triple::new();
        for &(c1, g, l) in coeffs.coaction(c) {
            for &(c2, g2, l2) in coeffs.coaction(c1) {
                accumulate(p, &mut left, (c2, g2, g), p.mul(l, l2));
            }
            for &(g1, g2, l2) in alg.reduced_coproduct(g) {
                accumulate(p, &mut right, (c1, g1, g2), p.mul(l, l2));
            }
        }
        if left != right {
            return Err(CoreError::Audit(format!("coaction is not coassociative on {}", coeffs.name(c))));
        }
    }
    Ok(())
}
