//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal, StandardUniform};

/// Floating-point scalar the laws and simulators are generic over (f32 or f64).
///
/// Sampling primitives live on the trait so generic code does not need to
/// repeat `rand_distr` bounds at every call site.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + rustfft::FftNum
    + Default
    + Display
    + Debug
    + Sum
    + Send
    + Sync
    + 'static
{
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform on `[0, 1)`.
    fn standard_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// `Gamma(shape, scale)` draw. Callers guarantee `shape > 0`, `scale > 0`.
    fn gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self;

    /// `Poisson(mean)` draw; zero when `mean == 0`.
    fn poisson<R: Rng + ?Sized>(mean: Self, rng: &mut R) -> u64;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            #[inline]
            fn standard_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardUniform.sample(rng)
            }

            #[inline]
            fn gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self {
                Gamma::new(shape, scale)
                    .expect("gamma parameters validated by caller")
                    .sample(rng)
            }

            #[inline]
            fn poisson<R: Rng + ?Sized>(mean: Self, rng: &mut R) -> u64 {
                if mean <= 0.0 {
                    return 0;
                }
                let draw: $t = Poisson::new(mean)
                    .expect("poisson mean validated by caller")
                    .sample(rng);
                draw as u64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}
