//! Exact linear algebra over `F_p` and over `Z/p^N`.

mod echelon;
mod truncated;
mod vector;

pub use echelon::{
    kernel_basis, kernel_of_columns, rank_of, rref, solve, solve_with, subquotient_basis, Echelon, Payload, Rref,
};
pub use truncated::{p_valuation, Modulus, TruncatedInteger, Valuation, MAX_MODULUS};
pub use vector::{SparseMatrix, SparseVector};
