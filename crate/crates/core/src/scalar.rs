//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Everything in the design and simulation paths is written against this
/// trait. The FFT bound comes from the Doppler processor, the sampling bounds
/// from seeded initialisation and receiver noise.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + rustfft::FftNum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Tolerance used when checking that a code entry sits on the unit circle.
    fn unit_modulus_tol() -> Self;

    /// Elementwise tolerance for Hermitian symmetry, relative to the largest entry.
    fn hermitian_tol() -> Self;

    /// Draws one standard normal variate.
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Draws one variate uniform on `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Converts an `f64` literal; every call site uses values representable in
    /// both precisions.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $tol:expr, $htol:expr) => {
        impl Real for $t {
            fn unit_modulus_tol() -> Self {
                $tol
            }

            fn hermitian_tol() -> Self {
                $htol
            }

            fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.random::<$t>()
            }
        }
    };
}

impl_real!(f32, 1e-5, 1e-4);
impl_real!(f64, 1e-12, 1e-10);

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
