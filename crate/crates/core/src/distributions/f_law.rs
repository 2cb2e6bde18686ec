use rand::Rng;
use serde::Serialize;

use super::poisson::PoissonWindow;
use super::{effective, ContinuousLaw, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::special::{ln_beta_kernel, reg_inc_beta_split};

/// Scaled, doubly non-central F law:
/// `X = scale · (A/ν₁) / (B/ν₂)` with independent `A ~ χ'²(ν₁, λ₁)` and
/// `B ~ χ'²(ν₂, λ₂)`.
///
/// For power estimates over `N` complex samples the degrees of freedom are
/// `2N` and each non-centrality is `2E/σ²` on its own side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FLaw<T> {
    dof_num: T,
    dof_den: T,
    scale: T,
    lambda_num: T,
    lambda_den: T,
    #[serde(skip)]
    moments: (T, T),
}

impl<T: Real> FLaw<T> {
    pub fn new(dof_num: T, dof_den: T, scale: T, lambda_num: T, lambda_den: T) -> Result<Self> {
        for (name, v) in [("numerator dof", dof_num), ("denominator dof", dof_den), ("scale", scale)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain(format!("F law {name} must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [("numerator", lambda_num), ("denominator", lambda_den)] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::domain(format!("F law {name} non-centrality must be finite and >= 0, got {v}")));
            }
        }
        let mut law = Self {
            dof_num,
            dof_den,
            scale,
            lambda_num,
            lambda_den,
            moments: (T::nan(), T::nan()),
        };
        law.moments = law.series_moments(&Tolerances::default())?;
        Ok(law)
    }

    /// Central F with the given degrees of freedom and unit scale.
    pub fn central(dof_num: T, dof_den: T) -> Result<Self> {
        Self::new(dof_num, dof_den, T::one(), T::zero(), T::zero())
    }

    pub fn dof_num(&self) -> T {
        self.dof_num
    }

    pub fn dof_den(&self) -> T {
        self.dof_den
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn lambda_num(&self) -> T {
        self.lambda_num
    }

    pub fn lambda_den(&self) -> T {
        self.lambda_den
    }

    fn windows(&self, tol: &Tolerances) -> Result<(PoissonWindow<T>, PoissonWindow<T>)> {
        let half = lit::<T>(0.5);
        let tail: T = effective::<T>(tol.f_law_tail) * half;
        let wj = PoissonWindow::new(self.lambda_num * half, tail, tol.max_terms);
        let wk = PoissonWindow::new(self.lambda_den * half, tail, tol.max_terms);
        match (wj, wk) {
            (Ok(a), Ok(b)) if a.weights.len().saturating_mul(b.weights.len()) <= tol.max_terms => Ok((a, b)),
            (Ok(a), Ok(b)) => Err(Error::computation(
                self.describe(),
                format!("{}x{} mixture exceeds term budget", a.weights.len(), b.weights.len()),
                (a.neglected + b.neglected).to_f64().unwrap_or(f64::NAN),
            )),
            (Err(e), _) | (_, Err(e)) => Err(e.in_law(self.describe())),
        }
    }

    /// `(E[1/B], E[1/B²])` for the denominator chi-square; infinite when the
    /// denominator dof is too small.
    fn inverse_moments(&self, tol: &Tolerances) -> Result<(T, T)> {
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        let (_, wk) = self.windows(tol)?;
        let (mut m1, mut m2) = (T::zero(), T::zero());
        for (i, &w) in wk.weights.iter().enumerate() {
            let d = self.dof_den + two * lit::<T>((wk.start + i) as f64);
            m1 = m1 + if d > two { w / (d - two) } else { T::infinity() };
            m2 = m2 + if d > four { w / ((d - two) * (d - four)) } else { T::infinity() };
        }
        Ok((m1, m2))
    }

    fn series_moments(&self, tol: &Tolerances) -> Result<(T, T)> {
        let two = lit::<T>(2.0);
        let (inv1, inv2) = self.inverse_moments(tol)?;
        let a1 = self.dof_num + self.lambda_num;
        let a2 = two * (self.dof_num + two * self.lambda_num) + a1 * a1;
        let c = self.scale * self.dof_den / self.dof_num;
        let mean = c * a1 * inv1;
        let var = if inv2.is_finite() { c * c * (a2 * inv2 - a1 * a1 * inv1 * inv1) } else { T::infinity() };
        Ok((mean, var))
    }

    /// Beta-variable argument and its complement for the unscaled ratio `z`.
    fn beta_args(&self, z: T) -> (T, T) {
        let num = self.dof_num * z;
        let denom = num + self.dof_den;
        (num / denom, self.dof_den / denom)
    }
}

impl<T: Real> ContinuousLaw<T> for FLaw<T> {
    fn cdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        if t <= T::zero() {
            return Ok(T::zero());
        }
        if t.is_infinite() {
            return Ok(T::one());
        }
        let (u, v) = self.beta_args(t / self.scale);
        let (wj, wk) = self.windows(tol)?;
        let half = lit::<T>(0.5);
        let b0 = self.dof_den * half + lit::<T>(wk.start as f64);
        let mut total = T::zero();
        for (i, &w_j) in wj.weights.iter().enumerate() {
            let a = self.dof_num * half + lit::<T>((wj.start + i) as f64);
            let mut b = b0;
            let mut ib = reg_inc_beta_split(u, v, a, b).map_err(|e| e.in_law(self.describe()))?;
            // I(a, b+1) = I(a, b) + u^a v^b / (b B(a, b))
            let mut step = ln_beta_kernel(u, v, a, b).exp() / b;
            let mut row = T::zero();
            for &w_k in &wk.weights {
                row = row + w_k * ib.min(T::one());
                ib = ib + step;
                step = if step > T::zero() {
                    step * v * (a + b) / (b + T::one())
                } else {
                    ln_beta_kernel(u, v, a, b + T::one()).exp() / (b + T::one())
                };
                b = b + T::one();
            }
            total = total + w_j * row;
        }
        Ok(total.clamp(T::zero(), T::one()))
    }

    fn pdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        if t <= T::zero() || t.is_infinite() {
            return Ok(T::zero());
        }
        let z = t / self.scale;
        let (u, v) = self.beta_args(z);
        let denom = self.dof_num * z + self.dof_den;
        let du_dz = self.dof_num * self.dof_den / (denom * denom);
        let (wj, wk) = self.windows(tol)?;
        let half = lit::<T>(0.5);
        let b0 = self.dof_den * half + lit::<T>(wk.start as f64);
        let mut total = T::zero();
        for (i, &w_j) in wj.weights.iter().enumerate() {
            let a = self.dof_num * half + lit::<T>((wj.start + i) as f64);
            let mut b = b0;
            // beta density u^{a-1} v^{b-1} / B(a, b), advanced by v (a+b)/b
            let mut dens = ln_beta_kernel(u, v, a, b).exp() / (u * v);
            let mut row = T::zero();
            for &w_k in &wk.weights {
                row = row + w_k * dens;
                dens = if dens > T::zero() {
                    dens * v * (a + b) / b
                } else {
                    ln_beta_kernel(u, v, a, b + T::one()).exp() / (u * v)
                };
                b = b + T::one();
            }
            total = total + w_j * row;
        }
        Ok(total * du_dz / self.scale)
    }

    fn mean(&self) -> T {
        self.moments.0
    }

    fn variance(&self) -> T {
        self.moments.1
    }

    fn support(&self) -> (T, T) {
        (T::zero(), T::infinity())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let half = lit::<T>(0.5);
        let two = lit::<T>(2.0);
        let chi2 = |dof: T, lambda: T, rng: &mut R| {
            let j = T::poisson(lambda * half, rng);
            two * T::gamma(dof * half + lit::<T>(j as f64), T::one(), rng)
        };
        let a = chi2(self.dof_num, self.lambda_num, rng);
        let b = chi2(self.dof_den, self.lambda_den, rng);
        self.scale * (a / self.dof_num) / (b / self.dof_den)
    }

    fn describe(&self) -> String {
        format!(
            "FLaw(dof=({}, {}), scale={}, lambda=({}, {}))",
            self.dof_num, self.dof_den, self.scale, self.lambda_num, self.lambda_den
        )
    }
}
