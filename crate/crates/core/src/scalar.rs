//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! The spectrum recursion, the bracket coefficients and the symbol calculus
//! only need field operations and an ordering, so they are written against
//! [`Scalar`]. `BigRational` gives exact results; `f64`/`f32` give fast
//! approximate ones. Operations that need roots or real powers ask for
//! [`RealScalar`] instead.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer literal representable")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn from_bigint(v: &BigInt) -> Self;

    fn from_rational(v: &BigRational) -> Self {
        Self::from_bigint(v.numer()) / Self::from_bigint(v.denom())
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `-1`, `0` or `+1`.
    fn sign(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Equality for exact types, relative closeness for floats.
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }

    fn pow_u(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }
}

impl Scalar for f64 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-12 * self.abs().max(other.abs()).max(1.0)
    }
}

impl Scalar for f32 {
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f32().unwrap_or(f32::NAN)
    }

    fn close_to(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-5 * self.abs().max(other.abs()).max(1.0)
    }
}

/// Scalars with square roots and real powers.
pub trait RealScalar: Scalar + Float {}

impl RealScalar for f64 {}
impl RealScalar for f32 {}
