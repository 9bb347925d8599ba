//! Graded algebras and Hopf-algebra structure: `A_*`, its motivic version,
//! `P_*`, and the Hopf algebroid `(BP_*, BP_*BP)`.

pub mod bp;
pub mod motivic;
pub mod poly;
pub mod polynomial;
pub mod steenrod;

pub use bp::{i_adic_weight, BpElement, BpStructure};
pub use motivic::{Bidegree, MotivicMonomial};
pub use polynomial::{gr_coaction, GradedVElement, PolynomialAlgebra, PolynomialMonomial};
pub use steenrod::{coproduct, SteenrodAlgebra, SteenrodMonomial};
