//! Exact rational dense linear algebra: rank, nullspace, subspace lattice
//! operations, Kalman matrices, right inverses.

pub mod matrix;
pub mod subspace;

pub use matrix::{rat, ratio, Rat, RationalMatrix};
pub use subspace::{column_space, krylov_closure, nullspace, Subspace};
