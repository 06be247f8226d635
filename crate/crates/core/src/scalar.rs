//! Scalar abstraction: solver arithmetic is generic over [`Scalar`],
//! implemented for `f32` and `f64`.

use num_traits::{Float, FromPrimitive, NumAssign, NumCast, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar used throughout the crate.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant (tolerances, literals) into `Self`.
    fn real(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite f64 constant must convert")
    }

    /// Lossy view as `f64`, for reports and error payloads.
    fn lossy_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_round_trip() {
        assert_eq!(f64::real(1e-10), 1e-10);
        assert_eq!(f32::real(0.5), 0.5f32);
        assert_eq!(2.5f64.lossy_f64(), 2.5);
    }
}
