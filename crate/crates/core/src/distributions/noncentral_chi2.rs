use rand::Rng;
use serde::Serialize;

use super::poisson::PoissonWindow;
use super::{effective, ContinuousLaw, ScaledGamma, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::special::{ln_gamma_kernel, reg_inc_gamma_lower};

/// Law of the mean power `(1/N) Σ |x_n|²` of `N` complex samples carrying
/// Gaussian power `power` plus a deterministic component of total energy
/// `energy`.
///
/// Equivalently `(power/N) · Gamma(N + J, 1)` with `J ~ Poisson(energy/power)`,
/// which is how both the cdf and the sampler are built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoncentralChi2C<T> {
    shape: T,
    power: T,
    energy: T,
}

impl<T: Real> NoncentralChi2C<T> {
    pub fn new(n: usize, power: T, energy: T) -> Result<Self> {
        let shape = T::from_usize(n).filter(|n| *n > T::zero()).ok_or_else(|| Error::domain("sample count must be > 0"))?;
        Self::with_shape(shape, power, energy)
    }

    /// As [`new`](Self::new) with a real-valued shape.
    pub fn with_shape(shape: T, power: T, energy: T) -> Result<Self> {
        if !(shape > T::zero() && shape.is_finite()) {
            return Err(Error::domain(format!("shape must be finite and > 0, got {shape}")));
        }
        if !(power > T::zero() && power.is_finite()) {
            return Err(Error::domain(format!("Gaussian power must be finite and > 0, got {power}")));
        }
        if !(energy >= T::zero() && energy.is_finite()) {
            return Err(Error::domain(format!("signal energy must be finite and >= 0, got {energy}")));
        }
        Ok(Self { shape, power, energy })
    }

    pub fn shape(&self) -> T {
        self.shape
    }

    pub fn power(&self) -> T {
        self.power
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    /// Mean of the Poisson mixing variable, `energy / power`.
    pub fn poisson_mean(&self) -> T {
        self.energy / self.power
    }

    /// Non-centrality on the real chi-square scale, `2 · energy / power`.
    pub fn lambda(&self) -> T {
        lit::<T>(2.0) * self.poisson_mean()
    }

    /// Multiplies the variate by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::with_shape(self.shape, self.power * c, self.energy * c)
    }

    fn unit_scale(&self) -> T {
        self.power / self.shape
    }

    /// `ln φ(ω)` split into real and imaginary parts.
    ///
    /// `φ(ω) = (1 - iωθ)^{-k} exp(iωe / (1 - iωθ))` with `θ = power/k`,
    /// `e = energy/k`. Returned in log form so a large `k` cannot overflow.
    pub(crate) fn ln_cf(&self, omega: T) -> (T, T) {
        let theta = self.unit_scale();
        let e = self.energy / self.shape;
        let wt = omega * theta;
        let denom = T::one() + wt * wt;
        let half = lit::<T>(0.5);
        let re = -half * self.shape * (wt * wt).ln_1p() - omega * omega * e * theta / denom;
        let im = self.shape * wt.atan() + omega * e / denom;
        (re, im)
    }

    /// `-d ln|φ(ω)| / d ln ω` of the Gaussian factor alone; the signal factor
    /// is non-increasing in `ω`, so this slope bounds the decay from below.
    pub(crate) fn cf_decay_slope(&self, omega: T) -> T {
        let wt = omega * self.unit_scale();
        let w2 = wt * wt;
        self.shape * w2 / (T::one() + w2)
    }

    /// Cumulant generating function `ln E[e^{sX}]`, finite for `s < k/power`.
    pub(crate) fn cgf(&self, s: T) -> T {
        let st = s * self.unit_scale();
        if st >= T::one() {
            return T::infinity();
        }
        -self.shape * (-st).ln_1p() + s * (self.energy / self.shape) / (T::one() - st)
    }

    /// Upper end of the domain of [`cgf`](Self::cgf).
    pub(crate) fn cgf_pole(&self) -> T {
        self.unit_scale().recip()
    }

    fn window(&self, tol: &Tolerances) -> Result<PoissonWindow<T>> {
        PoissonWindow::new(self.poisson_mean(), effective(tol.nc_chi2_tail), tol.max_terms).map_err(|e| e.in_law(self.describe()))
    }
}

impl<T: Real> From<ScaledGamma<T>> for NoncentralChi2C<T> {
    fn from(g: ScaledGamma<T>) -> Self {
        Self {
            shape: g.shape(),
            power: g.shape() * g.scale(),
            energy: T::zero(),
        }
    }
}

impl<T: Real> ContinuousLaw<T> for NoncentralChi2C<T> {
    fn cdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        if t <= T::zero() {
            return Ok(T::zero());
        }
        if t.is_infinite() {
            return Ok(T::one());
        }
        let y = t / self.unit_scale();
        let window = self.window(tol)?;
        let mut s = self.shape + lit::<T>(window.start as f64);
        let mut p = reg_inc_gamma_lower(s, y).map_err(|e| e.in_law(self.describe()))?;
        // P(s+1, y) = P(s, y) - y^s e^{-y} / Γ(s+1)
        let mut step = ln_gamma_kernel(s, y).exp() / s;
        let mut acc = T::zero();
        for &w in &window.weights {
            acc = acc + w * p.max(T::zero());
            p = p - step;
            s = s + T::one();
            step = if step > T::zero() { step * y / s } else { ln_gamma_kernel(s, y).exp() / s };
        }
        Ok(acc.clamp(T::zero(), T::one()))
    }

    fn pdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        if t < T::zero() || t.is_infinite() {
            return Ok(T::zero());
        }
        if t == T::zero() {
            // finite shape >= 1 always here unless built with a fractional shape
            return ScaledGamma::new(self.shape, self.unit_scale())?.pdf(t);
        }
        let y = t / self.unit_scale();
        let window = self.window(tol)?;
        let mut s = self.shape + lit::<T>(window.start as f64);
        // gamma density in y: y^{s-1} e^{-y} / Γ(s), advanced by y/s
        let mut g = ln_gamma_kernel(s, y).exp() / y;
        let mut acc = T::zero();
        for &w in &window.weights {
            acc = acc + w * g;
            g = if g > T::zero() { g * y / s } else { ln_gamma_kernel(s + T::one(), y).exp() / y };
            s = s + T::one();
        }
        Ok(acc / self.unit_scale())
    }

    fn mean(&self) -> T {
        self.power + self.energy / self.shape
    }

    fn variance(&self) -> T {
        let two = lit::<T>(2.0);
        self.power * self.power / self.shape + two * self.power * self.energy / (self.shape * self.shape)
    }

    fn support(&self) -> (T, T) {
        (T::zero(), T::infinity())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let j = T::poisson(self.poisson_mean(), rng);
        T::gamma(self.shape + lit::<T>(j as f64), self.unit_scale(), rng)
    }

    fn describe(&self) -> String {
        format!("NoncentralChi2C(n={}, power={}, energy={})", self.shape, self.power, self.energy)
    }
}
