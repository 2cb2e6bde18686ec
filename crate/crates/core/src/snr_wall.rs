//! False-alarm rates when thresholds are calibrated under a wrong noise power.
//!
//! Each rule sets its threshold for `nominal_pfa` under the *assumed* model
//! (the true scenario with `noise_power` replaced by `assumed_noise`) and is
//! then applied to data from the true scenario.
//!
//! The ON−OFF difference is not scale-free, so a threshold fixed in absolute
//! power units inherits the miscalibration. [`CalibrationRule::OnOffReferenced`]
//! instead scales the threshold by the measured background `(ON + OFF)/2`
//! relative to the assumed one, which makes the rule a function of `ON/OFF`
//! and therefore free of the noise level.

use serde::Serialize;

use crate::distributions::ContinuousLaw;
use crate::error::{Error, Result};
use crate::roc::threshold_for_pfa;
use crate::scalar::{lit, Real};
use crate::scenario::{energy_law, f_ratio_law, off_distribution, on_distribution, onoff_law, Hypothesis, ScenarioSpec};
use crate::simulator::{simulate_estimates, SynthOptions};
use crate::stats::exceedance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationRule {
    /// `ON / assumed_noise > τ`.
    Energy,
    /// `ON / OFF > τ`.
    FRatio,
    /// `ON − OFF > τ` with `τ` in absolute power units.
    OnOffFixed,
    /// `ON − OFF > τ · ((ON + OFF)/2) / b`, `b` the assumed mean background.
    OnOffReferenced,
}

impl CalibrationRule {
    pub const ALL: [CalibrationRule; 4] = [
        CalibrationRule::Energy,
        CalibrationRule::FRatio,
        CalibrationRule::OnOffFixed,
        CalibrationRule::OnOffReferenced,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CalibrationRule::Energy => "energy",
            CalibrationRule::FRatio => "f_ratio",
            CalibrationRule::OnOffFixed => "on_off_fixed",
            CalibrationRule::OnOffReferenced => "on_off_referenced",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WallRow<T> {
    pub rule: CalibrationRule,
    /// Threshold in the rule's native units (for `OnOffReferenced`, the
    /// value at the assumed background).
    pub threshold: T,
    pub analytic_pfa: T,
    pub empirical_pfa: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrWallReport<T> {
    pub nominal_pfa: T,
    pub assumed_noise: T,
    pub true_noise: T,
    pub n_samples: usize,
    pub rows: Vec<WallRow<T>>,
    #[serde(skip)]
    referenced_ratio: T,
}

impl<T: Real> SnrWallReport<T> {
    pub fn row(&self, rule: CalibrationRule) -> &WallRow<T> {
        self.rows.iter().find(|r| r.rule == rule).expect("all rules present")
    }

    /// Fills `empirical_pfa` from `trials` simulated H0 pairs of the true scenario.
    pub fn with_monte_carlo(mut self, spec: &ScenarioSpec<T>, trials: usize, seed: u64) -> Result<Self> {
        let est = simulate_estimates(spec, Hypothesis::H0, trials, seed, &SynthOptions::for_spec(spec))?;
        let ratio = |on: T, off: T| (on - off) / (on + off);
        for row in &mut self.rows {
            let stats: Vec<T> = match row.rule {
                CalibrationRule::Energy => est.on.iter().map(|&on| on / self.assumed_noise).collect(),
                CalibrationRule::FRatio => est.on.iter().zip(&est.off).map(|(&a, &b)| a / b).collect(),
                CalibrationRule::OnOffFixed => est.on.iter().zip(&est.off).map(|(&a, &b)| a - b).collect(),
                CalibrationRule::OnOffReferenced => est.on.iter().zip(&est.off).map(|(&a, &b)| ratio(a, b)).collect(),
            };
            let cut = if row.rule == CalibrationRule::OnOffReferenced { self.referenced_ratio } else { row.threshold };
            row.empirical_pfa = Some(exceedance(&stats, cut));
        }
        Ok(self)
    }
}

/// Analytic realized false-alarm rates of every rule.
pub fn snr_wall<T: Real>(spec: &ScenarioSpec<T>, assumed_noise: T, nominal_pfa: T) -> Result<SnrWallReport<T>> {
    spec.validate()?;
    let assumed = spec.with_noise_power(assumed_noise);
    assumed.validate()?;
    let h0 = Hypothesis::H0;

    let energy_t = threshold_for_pfa(&energy_law(&assumed, h0, assumed_noise)?, nominal_pfa)?;
    let energy_pfa = energy_law(spec, h0, assumed_noise)?.sf(energy_t)?;

    let true_f = f_ratio_law(spec, h0)?;
    let f_t = threshold_for_pfa(&f_ratio_law(&assumed, h0)?, nominal_pfa)?;
    let f_pfa = true_f.sf(f_t)?;

    let diff_t = threshold_for_pfa(&onoff_law(&assumed, h0)?, nominal_pfa)?;
    let diff_pfa = onoff_law(spec, h0)?.sf(diff_t)?;

    let background = (on_distribution(&assumed, h0)?.mean() + off_distribution(&assumed)?.mean()) * lit(0.5);
    // (ON − OFF)/(ON + OFF) > c  ⇔  ON/OFF > (1 + c)/(1 − c)
    let c = diff_t / (lit::<T>(2.0) * background);
    let referenced_pfa = if c >= T::one() {
        T::zero()
    } else if c <= -T::one() {
        T::one()
    } else {
        true_f.sf((T::one() + c) / (T::one() - c))?
    };
    if !referenced_pfa.is_finite() {
        return Err(Error::computation(true_f.describe(), "referenced ON-OFF rule", f64::NAN));
    }

    let row = |rule, threshold, analytic_pfa| WallRow {
        rule,
        threshold,
        analytic_pfa,
        empirical_pfa: None,
    };
    Ok(SnrWallReport {
        nominal_pfa,
        assumed_noise,
        true_noise: spec.noise_power,
        n_samples: spec.n_samples,
        rows: vec![
            row(CalibrationRule::Energy, energy_t, energy_pfa),
            row(CalibrationRule::FRatio, f_t, f_pfa),
            row(CalibrationRule::OnOffFixed, diff_t, diff_pfa),
            row(CalibrationRule::OnOffReferenced, diff_t, referenced_pfa),
        ],
        referenced_ratio: c,
    })
}
