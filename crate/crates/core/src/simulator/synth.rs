use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::chirp::ChirpParams;
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::scenario::{DetectorKind, EtKind, Hypothesis, RfiKind, ScenarioSpec, Steering};

/// Narrowband waveforms and phase handling for synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthOptions<T> {
    pub chirp_et: Option<ChirpParams<T>>,
    pub chirp_rfi: Option<ChirpParams<T>>,
    /// Draw a fresh uniform phase for each narrowband component of each stream.
    pub random_phase: bool,
}

impl<T> Default for SynthOptions<T> {
    fn default() -> Self {
        Self {
            chirp_et: None,
            chirp_rfi: None,
            random_phase: false,
        }
    }
}

impl<T: Real> SynthOptions<T> {
    /// Stationary tones matching the spec's energies: ET on bin `⌊N/4⌋`,
    /// RFI on bin `⌊3N/4⌋`. Distinct DFT bins keep the two tones orthogonal.
    pub fn for_spec(spec: &ScenarioSpec<T>) -> Self {
        let n = spec.n_samples;
        let bin = |k: usize| from_usize::<T>(k) / from_usize::<T>(n.max(1));
        let chirp_et = (spec.et_kind == EtKind::Narrowband)
            .then(|| ChirpParams::tone(ChirpParams::amplitude_for_energy(spec.et_energy, n), bin(n / 4)));
        let chirp_rfi = (spec.rfi_kind == RfiKind::Narrowband)
            .then(|| ChirpParams::tone(ChirpParams::amplitude_for_energy(spec.rfi_energy, n), bin(3 * n / 4)));
        Self {
            chirp_et,
            chirp_rfi,
            random_phase: false,
        }
    }

    pub fn with_random_phase(mut self, on: bool) -> Self {
        self.random_phase = on;
        self
    }

    /// Chirps must be present exactly for narrowband kinds and carry the
    /// energy the spec declares.
    pub fn validate(&self, spec: &ScenarioSpec<T>) -> Result<()> {
        check_chirp("ET", spec.et_kind == EtKind::Narrowband, self.chirp_et.as_ref(), spec.et_energy, spec.n_samples)?;
        check_chirp("RFI", spec.rfi_kind == RfiKind::Narrowband, self.chirp_rfi.as_ref(), spec.rfi_energy, spec.n_samples)
    }
}

fn check_chirp<T: Real>(what: &str, narrow: bool, chirp: Option<&ChirpParams<T>>, energy: T, n: usize) -> Result<()> {
    match (narrow, chirp) {
        (true, None) => Err(Error::validation(format!("narrowband {what} needs chirp parameters"))),
        (false, Some(_)) => Err(Error::validation(format!("chirp parameters given for a non-narrowband {what}"))),
        (false, None) => Ok(()),
        (true, Some(c)) => {
            let got = c.energy(n);
            let tol = lit::<T>(1e-9).max(T::epsilon() * lit(64.0));
            if (got - energy).abs() <= tol * energy.abs().max(T::min_positive_value()) || (got == energy) {
                Ok(())
            } else {
                Err(Error::validation(format!("{what} chirp energy {got} over {n} samples does not match spec energy {energy}")))
            }
        }
    }
}

#[inline]
fn complex_gaussian<T: Real, R: Rng + ?Sized>(sd: T, rng: &mut R) -> Complex<T> {
    Complex::new(sd * T::standard_normal(rng), sd * T::standard_normal(rng))
}

/// One ON or OFF stream of `N` complex baseband samples.
pub fn synth_stream<T: Real, R: Rng + ?Sized>(
    spec: &ScenarioSpec<T>,
    steering: Steering,
    hyp: Hypothesis,
    chirp_et: Option<&ChirpParams<T>>,
    chirp_rfi: Option<&ChirpParams<T>>,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    let opts = SynthOptions {
        chirp_et: chirp_et.copied(),
        chirp_rfi: chirp_rfi.copied(),
        random_phase: false,
    };
    synth_stream_with(spec, steering, hyp, &opts, rng)
}

pub fn synth_stream_with<T: Real, R: Rng + ?Sized>(
    spec: &ScenarioSpec<T>,
    steering: Steering,
    hyp: Hypothesis,
    opts: &SynthOptions<T>,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    spec.validate()?;
    opts.validate(spec)?;
    let mut out = Vec::new();
    fill_stream(spec, steering, hyp, opts, rng, &mut out);
    Ok(out)
}

/// Writes a stream into `out` (resized to `N`); inputs must already be validated.
pub(crate) fn fill_stream<T: Real, R: Rng + ?Sized>(
    spec: &ScenarioSpec<T>,
    steering: Steering,
    hyp: Hypothesis,
    opts: &SynthOptions<T>,
    rng: &mut R,
    out: &mut Vec<Complex<T>>,
) {
    let n = spec.n_samples;
    let half = lit::<T>(0.5);
    let on = steering == Steering::On;
    let with_et = on && hyp == Hypothesis::H1;
    let rfi_gain = if on { spec.gain.sqrt() } else { T::one() };

    out.clear();
    let noise_sd = (spec.noise_power * half).sqrt();
    out.extend((0..n).map(|_| complex_gaussian(noise_sd, rng)));

    match spec.rfi_kind {
        RfiKind::Wideband if spec.rfi_power > T::zero() => {
            let sd = (spec.rfi_power * half).sqrt();
            for x in out.iter_mut() {
                *x = *x + complex_gaussian(sd, rng).scale(rfi_gain);
            }
        }
        RfiKind::Narrowband => {
            if let Some(c) = &opts.chirp_rfi {
                add_chirp(out, c, rfi_gain, opts.random_phase, rng);
            }
        }
        _ => {}
    }

    if with_et {
        match spec.et_kind {
            EtKind::Wideband if spec.et_power > T::zero() => {
                let sd = (spec.et_power * half).sqrt();
                for x in out.iter_mut() {
                    *x = *x + complex_gaussian(sd, rng);
                }
            }
            EtKind::Narrowband => {
                if let Some(c) = &opts.chirp_et {
                    add_chirp(out, c, T::one(), opts.random_phase, rng);
                }
            }
            _ => {}
        }
    }
}

fn add_chirp<T: Real, R: Rng + ?Sized>(out: &mut [Complex<T>], c: &ChirpParams<T>, gain: T, random_phase: bool, rng: &mut R) {
    let offset = if random_phase { T::TAU() * T::standard_uniform(rng) } else { T::zero() };
    for (k, x) in out.iter_mut().enumerate() {
        *x = *x + c.sample(k, offset).scale(gain);
    }
}

/// Mean power `(1/N) Σ |x[k]|²`.
pub fn power_estimate<T: Real>(stream: &[Complex<T>]) -> Result<T> {
    if stream.is_empty() {
        return Err(Error::validation("power estimate of an empty stream"));
    }
    Ok(stream.iter().map(|z| z.norm_sqr()).sum::<T>() / from_usize::<T>(stream.len()))
}

/// Detector statistic from a pair of power estimates.
pub fn detector_stat<T: Real>(kind: DetectorKind, on_est: T, off_est: T, assumed_noise: T) -> Result<T> {
    match kind {
        DetectorKind::FRatio => {
            if off_est > T::zero() {
                Ok(on_est / off_est)
            } else {
                Err(Error::domain(format!("F ratio needs a positive OFF estimate, got {off_est}")))
            }
        }
        DetectorKind::OnOff => Ok(on_est - off_est),
        DetectorKind::Energy => {
            if assumed_noise > T::zero() {
                Ok(on_est / assumed_noise)
            } else {
                Err(Error::domain(format!("energy detector needs a positive assumed noise, got {assumed_noise}")))
            }
        }
    }
}
