//! Scalar abstraction for the numeric kernels.
//!
//! Every numeric kernel in this crate is generic over [`Scalar`] so the same
//! code instantiates at `f32` or `f64`. The analysis pipeline itself runs in
//! `f64` (see the aliases at the crate root): the fixed-point speed threshold
//! of 1e-8 leaves no headroom in single precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable")
    }

    /// Lossless-enough round trip back to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
