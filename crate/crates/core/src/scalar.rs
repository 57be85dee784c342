use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Coefficient field of a [`Series`](crate::Series).
///
/// Blanket-implemented for every binary floating point type that `num-traits`
/// knows about, in practice `f32` and `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in a float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        // `NumCast` rather than `FromPrimitive::from_f64`: the latter defaults to
        // truncation through i64 for types that do not override it.
        <Self as num_traits::NumCast>::from(x).expect("f64 converts to scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}
