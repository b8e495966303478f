//! Scalar abstraction used by every numerical routine in the crate.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the library is generic over.
///
/// `f32` and `f64` satisfy the blanket implementation. The bound is `Float`
/// rather than `Real` because the integrator and validators must detect NaN
/// and infinity explicitly.
pub trait RealScalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant (tolerance, quadrature weight) into `Self`.
    ///
    /// Panics if the value is not representable, which for finite constants
    /// cannot happen with `f32`/`f64`.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("constant must be representable in the scalar type")
    }
}

impl<T> RealScalar for T where
    T: Float
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + core::fmt::Debug
        + core::fmt::Display
        + Send
        + Sync
        + 'static
{
}
