//! The four RFI × ET data models and the exact law of each detector statistic.
//!
//! ON stream: `√g · rfi + noise (+ et under H1)`. OFF stream: `rfi + noise`.
//! Wideband components add Gaussian power; narrowband components add
//! deterministic energy. A power estimate with Gaussian power `σ²` and
//! energy `E` follows `NoncentralChi2C(N, σ², E)`, or `ScaledGamma` when `E = 0`.
//!
//! The narrowband/narrowband laws assume the ET and RFI tones are orthogonal
//! over the window, so their energies add.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{FLaw, GammaDifference, Law, NoncentralChi2C, ScaledGamma};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RfiKind {
    Wideband,
    Narrowband,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtKind {
    Wideband,
    Narrowband,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Steering {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    FRatio,
    OnOff,
    Energy,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 3] = [DetectorKind::FRatio, DetectorKind::OnOff, DetectorKind::Energy];

    pub fn as_str(self) -> &'static str {
        match self {
            DetectorKind::FRatio => "f_ratio",
            DetectorKind::OnOff => "on_off",
            DetectorKind::Energy => "energy",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unknown detector {s:?} (expected f_ratio, on_off or energy)")))
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::H0 => "H0",
            Hypothesis::H1 => "H1",
        })
    }
}

impl RfiKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RfiKind::Wideband => "wideband",
            RfiKind::Narrowband => "narrowband",
            RfiKind::None => "none",
        }
    }
}

impl EtKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EtKind::Wideband => "wideband",
            EtKind::Narrowband => "narrowband",
        }
    }
}

/// One observation model: interference and signal kinds with their strengths.
///
/// Only the power field matching a wideband kind, or the energy field
/// matching a narrowband kind, may be non-zero; [`validate`](Self::validate)
/// enforces this.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec<T> {
    pub rfi_kind: RfiKind,
    pub et_kind: EtKind,
    pub noise_power: T,
    pub rfi_power: T,
    pub rfi_energy: T,
    pub et_power: T,
    pub et_energy: T,
    /// ON/OFF RFI power gain `|ε|²`.
    pub gain: T,
    pub n_samples: usize,
}

impl<T: Real> ScenarioSpec<T> {
    /// Unit noise, no RFI, wideband ET of zero power, unit gain.
    pub fn new(n_samples: usize) -> Self {
        Self {
            rfi_kind: RfiKind::None,
            et_kind: EtKind::Wideband,
            noise_power: T::one(),
            rfi_power: T::zero(),
            rfi_energy: T::zero(),
            et_power: T::zero(),
            et_energy: T::zero(),
            gain: T::one(),
            n_samples,
        }
    }

    pub fn with_noise_power(mut self, power: T) -> Self {
        self.noise_power = power;
        self
    }

    pub fn with_wideband_rfi(mut self, power: T) -> Self {
        self.rfi_kind = RfiKind::Wideband;
        self.rfi_power = power;
        self.rfi_energy = T::zero();
        self
    }

    pub fn with_narrowband_rfi(mut self, energy: T) -> Self {
        self.rfi_kind = RfiKind::Narrowband;
        self.rfi_power = T::zero();
        self.rfi_energy = energy;
        self
    }

    pub fn without_rfi(mut self) -> Self {
        self.rfi_kind = RfiKind::None;
        self.rfi_power = T::zero();
        self.rfi_energy = T::zero();
        self
    }

    pub fn with_wideband_et(mut self, power: T) -> Self {
        self.et_kind = EtKind::Wideband;
        self.et_power = power;
        self.et_energy = T::zero();
        self
    }

    pub fn with_narrowband_et(mut self, energy: T) -> Self {
        self.et_kind = EtKind::Narrowband;
        self.et_power = T::zero();
        self.et_energy = energy;
        self
    }

    pub fn with_gain(mut self, gain: T) -> Self {
        self.gain = gain;
        self
    }

    pub fn with_n_samples(mut self, n: usize) -> Self {
        self.n_samples = n;
        self
    }

    /// Sets the ET strength for the current `et_kind` so that [`snr`](Self::snr)
    /// equals `10^(db/10)`.
    pub fn with_snr_db(self, db: T) -> Self {
        let ratio = db_to_ratio(db);
        match self.et_kind {
            EtKind::Wideband => self.with_wideband_et(ratio * self.noise_power),
            EtKind::Narrowband => {
                let e = ratio * self.noise_power * from_usize::<T>(self.n_samples);
                self.with_narrowband_et(e)
            }
        }
    }

    /// Sets the RFI strength for the current `rfi_kind` so that
    /// [`inr`](Self::inr) equals `10^(db/10)`. No effect without RFI.
    pub fn with_inr_db(self, db: T) -> Self {
        let ratio = db_to_ratio(db);
        match self.rfi_kind {
            RfiKind::Wideband => self.with_wideband_rfi(ratio * self.noise_power),
            RfiKind::Narrowband => {
                let e = ratio * self.noise_power * from_usize::<T>(self.n_samples);
                self.with_narrowband_rfi(e)
            }
            RfiKind::None => self,
        }
    }

    /// Signal-to-noise ratio per sample: `σ_ET²/σ_n²`, or `E_ET/(N σ_n²)`.
    pub fn snr(&self) -> T {
        match self.et_kind {
            EtKind::Wideband => self.et_power / self.noise_power,
            EtKind::Narrowband => self.et_energy / (from_usize::<T>(self.n_samples) * self.noise_power),
        }
    }

    /// Interference-to-noise ratio on the OFF stream, same convention as [`snr`](Self::snr).
    pub fn inr(&self) -> T {
        match self.rfi_kind {
            RfiKind::Wideband => self.rfi_power / self.noise_power,
            RfiKind::Narrowband => self.rfi_energy / (from_usize::<T>(self.n_samples) * self.noise_power),
            RfiKind::None => T::zero(),
        }
    }

    pub fn snr_db(&self) -> T {
        lit::<T>(10.0) * self.snr().log10()
    }

    /// Short tag such as `"wide_rfi-narrow_et"`.
    pub fn scenario_id(&self) -> String {
        let rfi = match self.rfi_kind {
            RfiKind::Wideband => "wide_rfi",
            RfiKind::Narrowband => "narrow_rfi",
            RfiKind::None => "no_rfi",
        };
        let et = match self.et_kind {
            EtKind::Wideband => "wide_et",
            EtKind::Narrowband => "narrow_et",
        };
        format!("{rfi}-{et}")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::validation("n_samples must be >= 1"));
        }
        if !(self.noise_power > T::zero() && self.noise_power.is_finite()) {
            return Err(Error::validation(format!("noise_power must be finite and > 0, got {}", self.noise_power)));
        }
        for (name, v) in [
            ("rfi_power", self.rfi_power),
            ("rfi_energy", self.rfi_energy),
            ("et_power", self.et_power),
            ("et_energy", self.et_energy),
            ("gain", self.gain),
        ] {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::validation(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        let rfi_ok = match self.rfi_kind {
            RfiKind::Wideband => self.rfi_energy == T::zero(),
            RfiKind::Narrowband => self.rfi_power == T::zero(),
            RfiKind::None => self.rfi_power == T::zero() && self.rfi_energy == T::zero(),
        };
        if !rfi_ok {
            return Err(Error::validation(format!(
                "rfi_kind = {} is inconsistent with rfi_power = {}, rfi_energy = {}",
                self.rfi_kind.as_str(),
                self.rfi_power,
                self.rfi_energy
            )));
        }
        let et_ok = match self.et_kind {
            EtKind::Wideband => self.et_energy == T::zero(),
            EtKind::Narrowband => self.et_power == T::zero(),
        };
        if !et_ok {
            return Err(Error::validation(format!(
                "et_kind = {} is inconsistent with et_power = {}, et_energy = {}",
                self.et_kind.as_str(),
                self.et_power,
                self.et_energy
            )));
        }
        Ok(())
    }

    /// Gaussian power of the ON stream.
    pub fn on_gaussian_power(&self, hyp: Hypothesis) -> T {
        let et = if hyp == Hypothesis::H1 { self.et_power } else { T::zero() };
        self.noise_power + self.gain * self.rfi_power + et
    }

    /// Deterministic energy of the ON stream.
    pub fn on_energy(&self, hyp: Hypothesis) -> T {
        let et = if hyp == Hypothesis::H1 { self.et_energy } else { T::zero() };
        self.gain * self.rfi_energy + et
    }

    pub fn off_gaussian_power(&self) -> T {
        self.noise_power + self.rfi_power
    }

    pub fn off_energy(&self) -> T {
        self.rfi_energy
    }
}

fn db_to_ratio<T: Real>(db: T) -> T {
    lit::<T>(10.0).powf(db / lit(10.0))
}

fn power_estimate_law<T: Real>(n: usize, power: T, energy: T) -> Result<Law<T>> {
    if energy == T::zero() {
        Ok(ScaledGamma::power_estimate(n, power)?.into())
    } else {
        Ok(NoncentralChi2C::new(n, power, energy)?.into())
    }
}

fn as_nc<T: Real>(law: Law<T>) -> NoncentralChi2C<T> {
    match law {
        Law::ScaledGamma(g) => g.into(),
        Law::NoncentralChi2C(nc) => nc,
        _ => unreachable!("power estimates are gamma or non-central"),
    }
}

/// Law of the ON power estimate.
pub fn on_distribution<T: Real>(spec: &ScenarioSpec<T>, hyp: Hypothesis) -> Result<Law<T>> {
    spec.validate()?;
    power_estimate_law(spec.n_samples, spec.on_gaussian_power(hyp), spec.on_energy(hyp))
}

/// Law of the OFF power estimate.
pub fn off_distribution<T: Real>(spec: &ScenarioSpec<T>) -> Result<Law<T>> {
    spec.validate()?;
    power_estimate_law(spec.n_samples, spec.off_gaussian_power(), spec.off_energy())
}

/// Law of `ON / OFF`.
///
/// The scale is the ratio of Gaussian powers; each non-centrality is the
/// side's deterministic energy relative to that side's Gaussian power.
pub fn f_ratio_law<T: Real>(spec: &ScenarioSpec<T>, hyp: Hypothesis) -> Result<Law<T>> {
    spec.validate()?;
    let two = lit::<T>(2.0);
    let dof = two * from_usize::<T>(spec.n_samples);
    let on_pow = spec.on_gaussian_power(hyp);
    let off_pow = spec.off_gaussian_power();
    let law = FLaw::new(
        dof,
        dof,
        on_pow / off_pow,
        two * spec.on_energy(hyp) / on_pow,
        two * spec.off_energy() / off_pow,
    )?;
    Ok(law.into())
}

/// Law of `ON − OFF`.
pub fn onoff_law<T: Real>(spec: &ScenarioSpec<T>, hyp: Hypothesis) -> Result<Law<T>> {
    let on = as_nc(on_distribution(spec, hyp)?);
    let off = as_nc(off_distribution(spec)?);
    Ok(GammaDifference::new(on, off)?.into())
}

/// Law of `ON / assumed_noise`.
pub fn energy_law<T: Real>(spec: &ScenarioSpec<T>, hyp: Hypothesis, assumed_noise: T) -> Result<Law<T>> {
    if !(assumed_noise > T::zero() && assumed_noise.is_finite()) {
        return Err(Error::domain(format!("assumed noise must be finite and > 0, got {assumed_noise}")));
    }
    spec.validate()?;
    power_estimate_law(
        spec.n_samples,
        spec.on_gaussian_power(hyp) / assumed_noise,
        spec.on_energy(hyp) / assumed_noise,
    )
}

/// Law of a detector statistic; the energy detector assumes the true noise power.
pub fn detector_law<T: Real>(spec: &ScenarioSpec<T>, kind: DetectorKind, hyp: Hypothesis) -> Result<Law<T>> {
    match kind {
        DetectorKind::FRatio => f_ratio_law(spec, hyp),
        DetectorKind::OnOff => onoff_law(spec, hyp),
        DetectorKind::Energy => energy_law(spec, hyp, spec.noise_power),
    }
}
