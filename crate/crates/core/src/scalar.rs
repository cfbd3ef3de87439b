//! Scalar abstraction: the whole calculus is generic over the floating type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating scalar used throughout the crate (`f64` in practice, `f32` works
/// at reduced tolerances).
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for literals and tolerances.
    fn c(x: f64) -> Self {
        Self::from(x).expect("literal must be representable")
    }

    /// Conversion from `usize` counters.
    fn of_usize(n: usize) -> Self {
        Self::from(n).expect("count must be representable")
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
}
