//! Real scalar abstraction: the whole crate is generic over the floating
//! type carrying both matrix entries (as `Complex<R>`) and angles.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating scalar usable as the real base type of the simulator.
///
/// Implemented for `f32` and `f64`. The single extension point over the
/// num-traits bounds is [`Real::of`], which injects `f64` literals and the
/// crate's named tolerance constants into generic code.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + std::fmt::Debug
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the generic scalar.
pub type C<R> = Complex<R>;

/// `e^{iφ}` as a complex number.
pub fn phase<R: Real>(phi: R) -> C<R> {
    C::from_polar(R::one(), phi)
}
