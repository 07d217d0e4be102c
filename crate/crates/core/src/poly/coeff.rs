use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Scalar field the polynomial types are generic over.
///
/// `f64` is the production type. `BigRational` is the exact mode used to
/// validate elimination steps where floating point subtracts near-equal
/// quantities.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// `|self| <= tol`; exact types ignore `tol` and test for zero.
    fn is_negligible(&self, tol: f64) -> bool;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn half() -> Self {
        0.5
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Exact rational from a double; every finite `f64` is a dyadic rational.
pub fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}
