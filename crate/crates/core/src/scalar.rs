//! Numeric type used for ratios (CNR, quantile thresholds).
//!
//! Everything that divides counts is generic over [`Scalar`], so the same
//! pipeline runs in `f64`, `f32`, or exact rationals.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Exact ratio of node/character counts.
pub type Rational = num_rational::Ratio<i64>;

pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync {
    /// `num / den` for non-negative counts; `den` must be non-zero.
    fn ratio(num: u64, den: u64) -> Self {
        debug_assert!(den != 0);
        Self::from_u64(num).expect("count fits scalar") / Self::from_u64(den).expect("count fits scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for Rational {}

/// Total order for scalars that never hold NaN.
pub(crate) fn cmp<S: Scalar>(a: &S, b: &S) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}
