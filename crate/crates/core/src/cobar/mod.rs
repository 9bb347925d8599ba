//! Cobar complexes and their cohomology.

pub mod coassoc;
pub mod complex;
pub mod detection;
pub mod ext;
pub mod integral;

use std::sync::Arc;

pub use coassoc::{check_coaction, check_coassociativity, check_counit};
pub use complex::{CobarComplex, CochainSlice, Coalgebra, Coefficients, ComplexTag};
pub use detection::{Detector, Filtration, LeadingTerm};
pub use ext::{ExtClass, ExtGroup};
pub use integral::{IntegralChain, IntegralComplex, IntegralSlice};

use crate::error::Result;
use crate::hopf::{BpStructure, PolynomialAlgebra, SteenrodAlgebra};
use crate::prime::Prime;

/// The cobar complex of `A_*` through `(s_max, t_max)`.
pub fn adams_complex(p: Prime, s_max: u32, t_max: u32) -> Result<CobarComplex> {
    let alg = Arc::new(SteenrodAlgebra::new(p, t_max));
    CobarComplex::build(ComplexTag::Adams, alg, Coefficients::trivial(), s_max, t_max)
}

/// The cobar complex of `P_*` with coefficients in `I^k/I^{k+1}`.
pub fn algnov_complex(bp: &BpStructure, alg: Arc<PolynomialAlgebra>, k: u32, s_max: u32, t_max: u32) -> Result<CobarComplex> {
    let coeffs = Coefficients::weight(bp, &alg, k)?;
    CobarComplex::build(ComplexTag::AlgNov(k), alg, coeffs, s_max, t_max)
}
