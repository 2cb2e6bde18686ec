//! Laws, simulators and ROC analysis for ON/OFF technosignature detection
//! in the presence of radio-frequency interference.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, with `…32` variants
//! for single precision.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Constants and test references keep every digit of their source values.
#![allow(clippy::excessive_precision)]

mod error;
mod scalar;

pub mod distributions;
pub mod roc;
pub mod scenario;
pub mod simulator;
pub mod snr_wall;
pub mod special;
pub mod stats;

pub use distributions::{ContinuousLaw, FLaw, GammaDifference, Law, NoncentralChi2C, ScaledGamma, Tolerances};
pub use error::{Error, Result};
pub use roc::{ComparisonRow, RocCurve, RocPoint};
pub use scalar::Real;
pub use scenario::{DetectorKind, EtKind, Hypothesis, RfiKind, ScenarioSpec, Steering};
pub use simulator::{ChirpParams, PairedEstimates, SynthOptions, TrialBatch};

pub type Law64 = Law<f64>;
pub type Law32 = Law<f32>;
pub type FLaw64 = FLaw<f64>;
pub type GammaDifference64 = GammaDifference<f64>;
pub type NoncentralChi2C64 = NoncentralChi2C<f64>;
pub type ScaledGamma64 = ScaledGamma<f64>;
pub type ScenarioSpec64 = ScenarioSpec<f64>;
pub type ScenarioSpec32 = ScenarioSpec<f32>;
pub type RocCurve64 = RocCurve<f64>;
pub type TrialBatch64 = TrialBatch<f64>;
pub type ChirpParams64 = ChirpParams<f64>;
