//! Scalar abstraction for the statistical parts of the crate.
//!
//! Shares, percentages and the power-law fit are computed over any
//! [`Scalar`]; the crate root exposes `f64` aliases for everyday use.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type usable for corpus statistics: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Display + Debug + Default + Send + Sync + 'static
{
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `num / den`, or zero when the population is empty.
pub fn ratio<F: Scalar>(num: usize, den: usize) -> F {
    if den == 0 {
        F::zero()
    } else {
        F::from_usize_lossy(num) / F::from_usize_lossy(den)
    }
}
