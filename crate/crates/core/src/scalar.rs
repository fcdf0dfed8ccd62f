//! Numeric abstractions shared by the crate.
//!
//! Everything that touches logarithms or square roots (objectives, planners,
//! certificate factors) is written against [`Real`], which is implemented for
//! `f32` and `f64`. The linear-programming layer only needs ordered-field
//! arithmetic and is written against [`LpScalar`], which is additionally
//! implemented for [`BigRational`] so the relaxation can be solved exactly.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive, Zero};

/// Ordered field used by the simplex and branch-and-bound solvers.
pub trait LpScalar:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// Zero-test tolerance. Exact types return zero.
    fn tolerance() -> Self;

    /// Converts an `f64`; exact types represent the binary value exactly.
    fn from_f64_value(x: f64) -> Self;

    fn to_f64_value(&self) -> f64;

    fn from_count(n: usize) -> Self;

    fn is_exact() -> bool {
        false
    }
}

/// Floating-point scalar for objectives and planners.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + LpScalar + Default + Display + Sum + Copy
{
    /// Lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    /// Absolute tolerance used by property assertions and feasibility checks.
    fn eps() -> Self {
        Self::of(1e-9)
    }
}

impl LpScalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn from_f64_value(x: f64) -> Self {
        x
    }
    fn to_f64_value(&self) -> f64 {
        *self
    }
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

impl LpScalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
    fn from_f64_value(x: f64) -> Self {
        x as f32
    }
    fn to_f64_value(&self) -> f64 {
        f64::from(*self)
    }
    fn from_count(n: usize) -> Self {
        n as f32
    }
}

impl Real for f64 {}

impl Real for f32 {
    fn eps() -> Self {
        1e-4
    }
}

impl LpScalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
    fn from_f64_value(x: f64) -> Self {
        BigRational::from_float(x).expect("finite value")
    }
    fn to_f64_value(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn from_count(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_exact() -> bool {
        true
    }
}
