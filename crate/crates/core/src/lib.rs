//! Exact computations for odd-primary Adams and algebraic Novikov spectral
//! sequences: cobar complexes over the dual Steenrod algebra and over
//! `BP_*BP`, Cartan–Eilenberg detection, and the transfer of algebraic Novikov
//! differentials to Adams differentials.

pub mod algnov;
pub mod cess;
pub mod cobar;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod names;
pub mod prime;
pub mod session;
pub mod transfer;

pub use error::{CoreError, Result};
pub use prime::{FpScalar, Prime};
