//! Scalar traits the linear algebra is generic over.
//!
//! [`Ring`] is what matrix products and lattice pairings need; [`Field`]
//! adds exact division, which row reduction, kernels and logarithms require.
//! Only exact types implement [`Field`]: there is no floating point mode.

use std::fmt::{Debug, Display};
use std::ops::{Div, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// A commutative ring with exact arithmetic and a textual form.
pub trait Ring: Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + FromStr {}

impl<T> Ring for T where T: Num + Neg<Output = T> + Clone + PartialEq + Debug + Display + FromStr {}

/// An exact field.
pub trait Field: Ring + Div<Output = Self> {
    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// `Some(z)` when the element is an integer.
    fn to_bigint(&self) -> Option<BigInt>;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl<T> Field for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + FromStr + FromPrimitive + Into<BigInt> + TryFrom<BigInt>,
{
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range for scalar type"))
    }

    fn from_bigint(n: &BigInt) -> Self {
        match T::try_from(n.clone()) {
            Ok(v) => Ratio::from_integer(v),
            Err(_) => panic!("integer {n} out of range for scalar type"),
        }
    }

    fn to_bigint(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.to_integer().into())
        } else {
            None
        }
    }
}
