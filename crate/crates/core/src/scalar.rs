//! Numeric abstraction shared by the scoring and reporting code.
//!
//! Every criterion is a ratio of small counts, so the same code runs on
//! `f64` for production and on exact rationals for verification.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A score value: anything numeric that can be built from count ratios.
pub trait Scalar: Num + FromPrimitive + ToPrimitive + Copy + PartialOrd + Debug + Send + Sync {
    /// `num / den` for non-negative counts. `den` must be non-zero.
    fn ratio(num: usize, den: usize) -> Self {
        let n = Self::from_usize(num).expect("count fits in scalar");
        let d = Self::from_usize(den).expect("count fits in scalar");
        n / d
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in scalar")
    }

    /// Lossy view used for rendering.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

impl<T> Scalar for T where T: Num + FromPrimitive + ToPrimitive + Copy + PartialOrd + Debug + Send + Sync {}

/// Mean of a slice, `None` when empty.
pub fn mean<S: Scalar>(values: &[S]) -> Option<S> {
    if values.is_empty() {
        return None;
    }
    let sum = values.iter().fold(S::zero(), |acc, &v| acc + v);
    Some(sum / S::from_count(values.len()))
}
