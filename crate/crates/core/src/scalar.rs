//! Numeric abstraction shared by scoring tables, dynamic programs and
//! distribution vectors.
//!
//! Scores may be floating point (`f32`, `f64`), integers (`i64`) or exact
//! rationals (`Rational64`). Exact types compare ties exactly; floating point
//! types use a relative tie tolerance.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{Num, Signed};

/// Relative tolerance used to decide that two `f64` path values tie.
pub const F64_TIE_TOLERANCE: f64 = 1e-9;

/// Relative tolerance used to decide that two `f32` path values tie.
pub const F32_TIE_TOLERANCE: f32 = 1e-5;

pub trait Scalar:
    Num + Signed + Copy + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// `true` when `candidate` is close enough to `best` to count as optimal.
    fn ties(candidate: Self, best: Self) -> bool;

    fn to_f64(self) -> f64;

    /// The value `num / den`, exact where the type allows it.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// Converts an `f64`, returning `None` if it cannot be represented.
    fn from_f64(value: f64) -> Option<Self>;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn ties(candidate: f64, best: f64) -> bool {
        (best - candidate).abs() <= F64_TIE_TOLERANCE * (1.0 + best.abs())
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn from_ratio(num: u64, den: u64) -> f64 {
        num as f64 / den as f64
    }

    fn from_f64(value: f64) -> Option<f64> {
        value.is_finite().then_some(value)
    }
}

impl Scalar for f32 {
    fn ties(candidate: f32, best: f32) -> bool {
        (best - candidate).abs() <= F32_TIE_TOLERANCE * (1.0 + best.abs())
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn from_ratio(num: u64, den: u64) -> f32 {
        (num as f64 / den as f64) as f32
    }

    fn from_f64(value: f64) -> Option<f32> {
        let v = value as f32;
        v.is_finite().then_some(v)
    }
}

impl Scalar for i64 {
    fn ties(candidate: i64, best: i64) -> bool {
        candidate == best
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    /// Truncating division; integer scores only ever need whole ratios.
    fn from_ratio(num: u64, den: u64) -> i64 {
        (num / den) as i64
    }

    fn from_f64(value: f64) -> Option<i64> {
        (value.is_finite() && value.fract() == 0.0 && value.abs() < 9.0e15).then_some(value as i64)
    }
}

impl Scalar for Rational64 {
    fn ties(candidate: Rational64, best: Rational64) -> bool {
        candidate == best
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn from_ratio(num: u64, den: u64) -> Rational64 {
        Rational64::new(num as i64, den as i64)
    }

    fn from_f64(value: f64) -> Option<Rational64> {
        Rational64::approximate_float(value)
    }
}
