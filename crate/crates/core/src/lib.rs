//! Sparse U-match factorization over prime fields.

#![allow(clippy::needless_range_loop)]

pub mod coeff;
pub mod complexes;
pub mod dense;
pub mod error;
pub mod lazy;
pub mod linalg;
pub mod matrix;
pub mod persistence;
pub mod sparsify;
pub mod umatch;

pub use coeff::{Field, FieldElement};
pub use error::{Result, UmatchError};
pub use matrix::{MatrixOracle, SparseVector, StoredCsMatrix};
