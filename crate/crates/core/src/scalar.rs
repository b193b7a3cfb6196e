use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the simulator is generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + rustfft::FftNum
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Tolerance for probability normalization and unit-norm checks at this precision.
    fn norm_tolerance() -> Self;

    /// Converts an `f64` constant into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 value representable in target scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn norm_tolerance() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn norm_tolerance() -> Self {
        1e-12
    }
}

/// Neumaier-compensated sum.
pub fn stable_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

/// `-p log2 p` with `0 log 0 = 0`.
pub fn entropy_term<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_sum_recovers_cancelled_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(stable_sum(xs), 2.0);
    }

    #[test]
    fn entropy_term_zero_convention() {
        assert_eq!(entropy_term(0.0f64), 0.0);
        assert_eq!(entropy_term(1.0f64), 0.0);
        assert!((entropy_term(0.5f32) - 0.5).abs() < 1e-7);
    }
}
