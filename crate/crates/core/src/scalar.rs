use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Anything that can be stored in a [`Matrix`](crate::Matrix).
pub trait Element: Copy + PartialEq + Debug + Send + Sync + 'static {
    /// `false` for NaN and infinities; always `true` for non-float entries.
    fn is_finite_entry(&self) -> bool;
}

impl Element for bool {
    fn is_finite_entry(&self) -> bool {
        true
    }
}

/// Real scalar used by every numerical routine in the crate: f32 or f64.
pub trait Scalar:
    Element
    + Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Picks the tolerance that matches this precision.
    fn precision(double: f64, single: f64) -> Self;

    /// Lossy conversion from `f64`. Tolerances and sampled values pass through here.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }
}

impl Element for f64 {
    fn is_finite_entry(&self) -> bool {
        self.is_finite()
    }
}

impl Element for f32 {
    fn is_finite_entry(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    fn precision(double: f64, _single: f64) -> Self {
        double
    }
}

impl Scalar for f32 {
    fn precision(_double: f64, single: f64) -> Self {
        single as f32
    }
}

/// Numerical thresholds shared by the direct algorithm and its oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative pivot threshold below which an LU factorization is flagged singular.
    pub pivot: T,
    /// Relative residual accepted for a left null vector.
    pub null_space: T,
    /// Probabilities in `[-clamp, 0)` are rounded up to zero; anything lower is an error.
    pub clamp: T,
    /// Row-sum and sign tolerance applied when validating an intensity matrix.
    pub validation: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            pivot: T::precision(1e-12, 1e-6),
            null_space: T::precision(1e-9, 1e-4),
            clamp: T::precision(1e-12, 1e-5),
            validation: T::precision(1e-9, 1e-4),
        }
    }
}
