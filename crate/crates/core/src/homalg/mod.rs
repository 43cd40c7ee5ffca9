//! Exact homological algebra over Z and Q.

pub mod chain;
pub mod lattice;
pub mod matrix;
pub mod nerve;
pub mod rational;
pub mod snf;

use thiserror::Error;

pub use chain::{render_groups, same_homology, AbelianGroup, ChainComplex, Coefficients};
pub use matrix::{IntegerMatrix, SparseMatrix, SparseVec};
pub use nerve::{nerve_chain_complex, order_complex, order_complex_homology};
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomalgError {
    #[error("boundary matrix in degree {degree} has the wrong shape")]
    ShapeMismatch { degree: usize },
    #[error("d_{} d_{degree} is not zero", degree - 1)]
    BoundaryNotNilpotent { degree: usize },
    #[error("category is not finite directed: {0}")]
    NotFiniteDirected(String),
}
