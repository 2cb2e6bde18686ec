//! Sampling laws of the power estimate and of the two ON/OFF test statistics.
//!
//! | Law | Variate | Evaluation |
//! |---|---|---|
//! | [`ScaledGamma`] | mean power of `N` complex Gaussians | incomplete gamma |
//! | [`NoncentralChi2C`] | same, plus a deterministic signal of energy `E` | Poisson mixture of gamma cdfs |
//! | [`FLaw`] | scaled, possibly doubly non-central F ratio | double Poisson mixture of incomplete beta |
//! | [`GammaDifference`] | difference of two independent power estimates | characteristic-function inversion |
//!
//! Every public constructor takes the user-facing sample count `N`; the
//! internal real degrees of freedom are `2N` and the non-centrality is
//! `λ = 2E/σ²`.

mod f_law;
mod gamma_difference;
mod noncentral_chi2;
mod poisson;
mod quantile;
mod scaled_gamma;

pub use f_law::FLaw;
pub use gamma_difference::GammaDifference;
pub use noncentral_chi2::NoncentralChi2C;
pub use scaled_gamma::ScaledGamma;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::{lit, Real};

/// Neglected Poisson mass for the non-central power law.
pub const NC_CHI2_TAIL: f64 = 1e-12;
/// Combined neglected Poisson mass for the doubly non-central F law.
pub const F_LAW_TAIL: f64 = 1e-10;
/// Target absolute accuracy of the characteristic-function inversion.
pub const GAMMA_DIFFERENCE_TOL: f64 = 1e-10;
/// `|cdf(quantile(p)) - p|` target.
pub const QUANTILE_TOL: f64 = 1e-10;
/// Term budget for any single series.
pub const MAX_TERMS: usize = 2_000_000;

/// Per-call numerical tolerances; `Default` yields the module constants.
///
/// Values below the resolution of the scalar type are raised to a small
/// multiple of its machine epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub nc_chi2_tail: f64,
    pub f_law_tail: f64,
    pub gamma_difference: f64,
    pub quantile: f64,
    pub max_terms: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            nc_chi2_tail: NC_CHI2_TAIL,
            f_law_tail: F_LAW_TAIL,
            gamma_difference: GAMMA_DIFFERENCE_TOL,
            quantile: QUANTILE_TOL,
            max_terms: MAX_TERMS,
        }
    }
}

/// Clamps a tolerance to what the scalar type can resolve.
pub(crate) fn effective<T: Real>(tol: f64) -> T {
    lit::<T>(tol).max(T::epsilon() * lit(64.0))
}

/// A univariate continuous law.
pub trait ContinuousLaw<T: Real> {
    fn cdf_with(&self, t: T, tol: &Tolerances) -> Result<T>;

    fn pdf_with(&self, t: T, tol: &Tolerances) -> Result<T>;

    fn cdf(&self, t: T) -> Result<T> {
        self.cdf_with(t, &Tolerances::default())
    }

    fn pdf(&self, t: T) -> Result<T> {
        self.pdf_with(t, &Tolerances::default())
    }

    /// Upper tail `P(X > t)`.
    fn sf(&self, t: T) -> Result<T> {
        Ok(T::one() - self.cdf(t)?)
    }

    fn mean(&self) -> T;

    fn variance(&self) -> T;

    /// Closed support interval; endpoints may be infinite.
    fn support(&self) -> (T, T);

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T;

    /// Short human-readable parameterization, used in error messages.
    fn describe(&self) -> String;

    fn quantile_with(&self, p: T, tol: &Tolerances) -> Result<T>
    where
        Self: Sized,
    {
        quantile::invert(self, p, tol)
    }

    fn quantile(&self, p: T) -> Result<T>
    where
        Self: Sized,
    {
        self.quantile_with(p, &Tolerances::default())
    }

    /// `count` i.i.d. draws.
    fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<T>
    where
        Self: Sized,
    {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

/// Any of the laws a detector statistic can follow.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Law<T> {
    ScaledGamma(ScaledGamma<T>),
    NoncentralChi2C(NoncentralChi2C<T>),
    F(FLaw<T>),
    GammaDifference(GammaDifference<T>),
}

macro_rules! dispatch {
    ($self:ident, $law:ident => $body:expr) => {
        match $self {
            Law::ScaledGamma($law) => $body,
            Law::NoncentralChi2C($law) => $body,
            Law::F($law) => $body,
            Law::GammaDifference($law) => $body,
        }
    };
}

impl<T: Real> ContinuousLaw<T> for Law<T> {
    fn cdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        dispatch!(self, law => law.cdf_with(t, tol))
    }

    fn pdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        dispatch!(self, law => law.pdf_with(t, tol))
    }

    fn mean(&self) -> T {
        dispatch!(self, law => law.mean())
    }

    fn variance(&self) -> T {
        dispatch!(self, law => law.variance())
    }

    fn support(&self) -> (T, T) {
        dispatch!(self, law => law.support())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        dispatch!(self, law => law.sample(rng))
    }

    fn describe(&self) -> String {
        dispatch!(self, law => law.describe())
    }
}

impl<T> From<ScaledGamma<T>> for Law<T> {
    fn from(law: ScaledGamma<T>) -> Self {
        Law::ScaledGamma(law)
    }
}

impl<T> From<NoncentralChi2C<T>> for Law<T> {
    fn from(law: NoncentralChi2C<T>) -> Self {
        Law::NoncentralChi2C(law)
    }
}

impl<T> From<FLaw<T>> for Law<T> {
    fn from(law: FLaw<T>) -> Self {
        Law::F(law)
    }
}

impl<T> From<GammaDifference<T>> for Law<T> {
    fn from(law: GammaDifference<T>) -> Self {
        Law::GammaDifference(law)
    }
}

/// CDF of the non-central mean-power law at `t`.
pub fn nc_chi2_cdf<T: Real>(law: &NoncentralChi2C<T>, t: T) -> Result<T> {
    law.cdf(t)
}

/// CDF of the scaled (doubly non-central) F law at `t`.
pub fn f_law_cdf<T: Real>(law: &FLaw<T>, t: T) -> Result<T> {
    law.cdf(t)
}

/// Density and distribution function of a power difference at `t`.
pub fn gamma_diff_pdf_cdf<T: Real>(law: &GammaDifference<T>, t: T) -> Result<(T, T)> {
    law.pdf_cdf(t, &Tolerances::default())
}

pub fn law_quantile<T: Real, L: ContinuousLaw<T>>(law: &L, p: T) -> Result<T> {
    law.quantile(p)
}

pub fn law_sample<T: Real, L: ContinuousLaw<T>, R: Rng + ?Sized>(law: &L, rng: &mut R, count: usize) -> Vec<T> {
    law.sample_n(rng, count)
}
