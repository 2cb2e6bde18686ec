use rand::Rng;
use serde::Serialize;

use super::{ContinuousLaw, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{ln_gamma_kernel, reg_inc_gamma_lower, reg_inc_gamma_upper};

/// `Gamma(shape, scale)`: the law of a noise-only power estimate with
/// `shape = N` and `scale = σ²/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledGamma<T> {
    shape: T,
    scale: T,
}

impl<T: Real> ScaledGamma<T> {
    pub fn new(shape: T, scale: T) -> Result<Self> {
        if !(shape > T::zero() && shape.is_finite()) {
            return Err(Error::domain(format!("gamma shape must be finite and > 0, got {shape}")));
        }
        if !(scale > T::zero() && scale.is_finite()) {
            return Err(Error::domain(format!("gamma scale must be finite and > 0, got {scale}")));
        }
        Ok(Self { shape, scale })
    }

    /// Mean power of `n` complex Gaussian samples of total power `power`.
    pub fn power_estimate(n: usize, power: T) -> Result<Self> {
        let n = T::from_usize(n).filter(|n| *n > T::zero()).ok_or_else(|| Error::domain("sample count must be > 0"))?;
        Self::new(n, power / n)
    }

    pub fn shape(&self) -> T {
        self.shape
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// `P(X > t)` without the cancellation of `1 - cdf`.
    pub fn upper_tail(&self, t: T) -> Result<T> {
        if t <= T::zero() {
            return Ok(T::one());
        }
        reg_inc_gamma_upper(self.shape, t / self.scale)
    }
}

impl<T: Real> ContinuousLaw<T> for ScaledGamma<T> {
    fn cdf_with(&self, t: T, _tol: &Tolerances) -> Result<T> {
        if t <= T::zero() {
            return Ok(T::zero());
        }
        reg_inc_gamma_lower(self.shape, t / self.scale)
    }

    fn pdf_with(&self, t: T, _tol: &Tolerances) -> Result<T> {
        if t < T::zero() {
            return Ok(T::zero());
        }
        if t == T::zero() {
            return Ok(if self.shape < T::one() {
                T::infinity()
            } else if self.shape == T::one() {
                self.scale.recip()
            } else {
                T::zero()
            });
        }
        if t.is_infinite() {
            return Ok(T::zero());
        }
        Ok(ln_gamma_kernel(self.shape, t / self.scale).exp() / t)
    }

    fn sf(&self, t: T) -> Result<T> {
        self.upper_tail(t)
    }

    fn mean(&self) -> T {
        self.shape * self.scale
    }

    fn variance(&self) -> T {
        self.shape * self.scale * self.scale
    }

    fn support(&self) -> (T, T) {
        (T::zero(), T::infinity())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        T::gamma(self.shape, self.scale, rng)
    }

    fn describe(&self) -> String {
        format!("ScaledGamma(shape={}, scale={})", self.shape, self.scale)
    }
}
