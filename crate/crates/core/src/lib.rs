//! Exact calculus for isolated-singularity degenerations: zig-zag models of
//! perverse sheaves at a singular point, Picard-Lefschetz monodromy,
//! nilpotent logarithms and monodromy weight filtrations.
//!
//! The linear algebra in [`qlinalg`] is generic over an exact [`Field`];
//! the domain modules fix the rationals through the aliases below.

pub mod degeneration;
pub mod monodromy;
pub mod qlinalg;
pub mod zigzag;

pub use qlinalg::{Field, LinalgError, Ring};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

/// Arbitrary-precision rationals: the coefficient field everywhere.
pub type Q = BigRational;
/// Arbitrary-precision integers, for lattices.
pub type Z = BigInt;

pub type QMatrix = qlinalg::Matrix<Q>;
pub type ZMatrix = qlinalg::Matrix<Z>;
pub type QSubspace = qlinalg::Subspace<Q>;
pub type QFiltration = qlinalg::Filtration<Q>;

/// Machine-word rationals. Exact, but arithmetic panics on overflow; only
/// suitable for small entries.
pub type Q64 = Rational64;
pub type Q64Matrix = qlinalg::Matrix<Q64>;

/// Compact JSON with object keys sorted, so equal values serialize to equal
/// bytes.
pub fn canonical_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_value(value).and_then(|v| serde_json::to_string(&v))
}
