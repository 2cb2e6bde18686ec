use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::synth::{detector_stat, fill_stream, power_estimate, SynthOptions};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scenario::{DetectorKind, Hypothesis, ScenarioSpec, Steering};

/// RNG for trial `index` of a batch: the seed picks the key, the index the stream.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Detector statistics from independent trials, in trial order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialBatch<T> {
    pub detector: DetectorKind,
    pub hyp: Hypothesis,
    pub stats: Vec<T>,
    pub seed: u64,
    pub spec: ScenarioSpec<T>,
}

/// Paired ON/OFF power estimates; any detector statistic can be derived from them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedEstimates<T> {
    pub on: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> PairedEstimates<T> {
    pub fn len(&self) -> usize {
        self.on.len()
    }

    pub fn is_empty(&self) -> bool {
        self.on.is_empty()
    }

    pub fn stats(&self, kind: DetectorKind, assumed_noise: T) -> Result<Vec<T>> {
        self.on
            .iter()
            .zip(&self.off)
            .map(|(&on, &off)| detector_stat(kind, on, off, assumed_noise))
            .collect()
    }
}

/// Runs `trials` independent ON/OFF syntheses in parallel.
pub fn simulate_estimates<T: Real>(
    spec: &ScenarioSpec<T>,
    hyp: Hypothesis,
    trials: usize,
    seed: u64,
    opts: &SynthOptions<T>,
) -> Result<PairedEstimates<T>> {
    if trials == 0 {
        return Err(Error::validation("trial count must be >= 1"));
    }
    spec.validate()?;
    opts.validate(spec)?;
    let pairs: Vec<(T, T)> = (0..trials as u64)
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            let mut rng = trial_rng(seed, i);
            fill_stream(spec, Steering::On, hyp, opts, &mut rng, buf);
            let on = power_estimate(buf).expect("stream has n_samples >= 1");
            fill_stream(spec, Steering::Off, hyp, opts, &mut rng, buf);
            let off = power_estimate(buf).expect("stream has n_samples >= 1");
            (on, off)
        })
        .collect();
    let (on, off) = pairs.into_iter().unzip();
    Ok(PairedEstimates { on, off })
}

/// Monte Carlo batch with default tones and the true noise power as the
/// energy detector's assumption.
pub fn run_trials<T: Real>(spec: &ScenarioSpec<T>, kind: DetectorKind, hyp: Hypothesis, trials: usize, seed: u64) -> Result<TrialBatch<T>> {
    run_trials_with(spec, kind, hyp, trials, seed, &SynthOptions::for_spec(spec), spec.noise_power)
}

pub fn run_trials_with<T: Real>(
    spec: &ScenarioSpec<T>,
    kind: DetectorKind,
    hyp: Hypothesis,
    trials: usize,
    seed: u64,
    opts: &SynthOptions<T>,
    assumed_noise: T,
) -> Result<TrialBatch<T>> {
    let stats = simulate_estimates(spec, hyp, trials, seed, opts)?.stats(kind, assumed_noise)?;
    Ok(TrialBatch {
        detector: kind,
        hyp,
        stats,
        seed,
        spec: *spec,
    })
}
