//! The structure tables and complexes for one prime and window, built once
//! and shared by detection, decomposition and the audits.

use std::sync::Arc;

use crate::cobar::{algnov_complex, CobarComplex, Coefficients, ComplexTag, Detector};
use crate::error::{CoreError, Result};
use crate::hopf::{BpStructure, PolynomialAlgebra, SteenrodAlgebra};
use crate::prime::Prime;

pub struct Session {
    prime: Prime,
    s_max: u32,
    t_max: u32,
    k_max: u32,
    steenrod: Arc<SteenrodAlgebra>,
    bp: Arc<BpStructure>,
    poly: Arc<PolynomialAlgebra>,
    adams: CobarComplex,
    algnov: Vec<CobarComplex>,
}

impl Session {
    /// Structure tables through `t_max`, the `A_*` complex and the weight
    /// complexes `k = 0..=k_max`, all through `s_max`.
    pub fn build(prime: Prime, s_max: u32, t_max: u32, k_max: u32) -> Result<Self> {
        Self::assemble(prime, s_max, t_max, k_max, |steenrod, bp, poly| {
            let adams = CobarComplex::build(ComplexTag::Adams, steenrod, Coefficients::trivial(), s_max, t_max)?;
            let algnov = (0..=k_max)
                .map(|k| algnov_complex(bp, poly.clone(), k, s_max, t_max))
                .collect::<Result<Vec<_>>>()?;
            Ok((adams, algnov))
        })
    }

    /// Like [`Session::build`], with the complexes supplied by `complexes`
    /// (e.g. loaded from a cache) instead of built.
    pub fn assemble<E: From<CoreError>>(
        prime: Prime,
        s_max: u32,
        t_max: u32,
        k_max: u32,
        complexes: impl FnOnce(
            Arc<SteenrodAlgebra>,
            &BpStructure,
            Arc<PolynomialAlgebra>,
        ) -> Result<(CobarComplex, Vec<CobarComplex>), E>,
    ) -> Result<Self, E> {
        let steenrod = Arc::new(SteenrodAlgebra::new(prime, t_max));
        let bp = Arc::new(BpStructure::new(prime, t_max)?);
        let poly = Arc::new(PolynomialAlgebra::new(&bp));
        let (adams, algnov) = complexes(steenrod.clone(), &bp, poly.clone())?;
        if adams.tag() != ComplexTag::Adams || algnov.len() != k_max as usize + 1 {
            return Err(CoreError::Mismatch("session needs the adams complex and one complex per weight".into()).into());
        }
        for (k, c) in algnov.iter().enumerate() {
            if c.tag() != ComplexTag::AlgNov(k as u32) {
                return Err(CoreError::Mismatch(format!("expected algnov-k{k}, got {}", c.tag())).into());
            }
        }
        Ok(Session {
            prime,
            s_max,
            t_max,
            k_max,
            steenrod,
            bp,
            poly,
            adams,
            algnov,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn steenrod(&self) -> &Arc<SteenrodAlgebra> {
        &self.steenrod
    }

    pub fn bp(&self) -> &Arc<BpStructure> {
        &self.bp
    }

    pub fn poly(&self) -> &Arc<PolynomialAlgebra> {
        &self.poly
    }

    pub fn adams(&self) -> &CobarComplex {
        &self.adams
    }

    pub fn algnov(&self, k: u32) -> Result<&CobarComplex> {
        self.algnov
            .get(k as usize)
            .ok_or_else(|| CoreError::OutOfRange(format!("weight {k} beyond k_max = {}", self.k_max)))
    }

    pub fn algnov_all(&self) -> &[CobarComplex] {
        &self.algnov
    }

    /// Every complex in the session, `A_*` first.
    pub fn complexes(&self) -> impl Iterator<Item = &CobarComplex> {
        std::iter::once(&self.adams).chain(self.algnov.iter())
    }

    pub fn detector(&self) -> Result<Detector<'_>> {
        Detector::new(&self.steenrod, &self.poly, &self.adams, self.algnov.iter().collect())
    }
}
