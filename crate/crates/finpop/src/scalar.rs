//! Floating-point scalar abstraction.

use core::fmt::{Debug, Display};
use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type the whole crate is generic over.
///
/// Blanket-implemented, so `f64` and `f32` (and anything equally float-like)
/// qualify automatically. The crate root exports concrete aliases for both.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + 'static
{
}

/// Converts an `f64` constant into the working scalar.
pub(crate) fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Converts an integer count (sizes, subset tallies) into the working scalar.
pub(crate) fn count<F: Real>(n: u64) -> F {
    F::from_u64(n).expect("count must convert into the scalar type")
}
