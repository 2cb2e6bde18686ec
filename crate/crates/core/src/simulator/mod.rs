//! Synthetic ON/OFF sample streams, power estimates and Monte Carlo batches.

mod chirp;
mod spectrogram;
mod synth;
mod trials;

pub use chirp::ChirpParams;
pub use spectrogram::{peak_bins, spectrogram, spectrogram_with, Window};
pub use synth::{detector_stat, power_estimate, synth_stream, synth_stream_with, SynthOptions};
pub use trials::{run_trials, run_trials_with, simulate_estimates, trial_rng, PairedEstimates, TrialBatch};
