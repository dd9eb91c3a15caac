//! Scalar abstraction for metric arithmetic.
//!
//! Every metric is generic over [`Scalar`], so the same code path runs on
//! `f64` for reporting and on [`num_rational::Rational64`] when a value has
//! to be checked exactly (e.g. `13/7` or `781/40`).

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Numeric type usable for latency arithmetic: `f32`, `f64`, or an exact rational.
pub trait Scalar:
    Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossless conversion of a count (token index, length).
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Conversion of a wall-clock value in milliseconds.
    #[inline]
    fn from_ms(ms: f64) -> Self {
        Self::from_f64(ms).expect("finite millisecond value")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl<T> Scalar for T where
    T: Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Arithmetic mean of a slice; `None` when empty.
pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let total = values.iter().fold(T::zero(), |acc, &v| acc + v);
    Some(total / T::from_count(values.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn mean_is_exact_on_rationals() {
        let v = [Rational64::new(1, 3), Rational64::new(2, 3)];
        assert_eq!(mean(&v), Some(Rational64::new(1, 2)));
        assert_eq!(mean::<f64>(&[]), None);
    }

    #[test]
    fn max_of_picks_larger() {
        assert_eq!(3.0f64.max_of(4.0), 4.0);
        assert_eq!(Rational64::from_count(5).max_of(Rational64::new(1, 2)), Rational64::from_integer(5));
    }
}
