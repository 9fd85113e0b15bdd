//! Exact linear algebra over a field: matrices, canonical subspaces,
//! filtrations and the nilpotent/unipotent operator calculus.
//!
//! Everything here is generic over [`Field`]; the rest of the crate works
//! with the rational instantiation re-exported at the crate root.

mod filtration;
mod matrix;
mod operator;
pub mod poly;
mod scalar;
mod serial;
mod subspace;

pub use filtration::Filtration;
pub use matrix::Matrix;
pub use operator::{
    exp_nilpotent, is_nilpotent, is_quasi_unipotent, is_unipotent, log_unipotent, nilpotency_index, QuasiUnipotence,
};
pub use scalar::{Field, Ring};
pub use serial::{scalars, FiltrationJson, StepJson};
pub use subspace::{image, kernel, Subspace};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("cannot {op} a {}x{} matrix with a {}x{} matrix", left.0, left.1, right.0, right.1)]
    Dimension { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("expected a {}x{} matrix, found {}x{}", expected.0, expected.1, found.0, found.1)]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("a {rows}x{cols} matrix needs {} entries, found {found}", rows * cols)]
    EntryCount { rows: usize, cols: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("subspaces live in different ambient spaces (dimensions {left} and {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unipotent: (T - id)^dim != 0")]
    NotUnipotent,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("invalid filtration: {0}")]
    Filtration(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}
