//! Batch front-end for the `seti-onoff` library: reads a TOML experiment
//! config, runs analytic and Monte Carlo pipelines and writes CSV results
//! with a JSON manifest.
//!
//! Verbs:
//! - `roc`: ROC curves and the summary table in the config's mode.
//! - `mc-validate`: the same with `mode = "both"`, adding histograms and KS distances.
//! - `compare`: F-ratio and ON−OFF AUC across RFI gains.
//! - `spectrogram`: spectrogram of a synthetic chirp in noise.
//!
//! Identical inputs give byte-identical files.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::Serialize;
use seti_onoff::roc::compare_detectors;
use seti_onoff::simulator::{peak_bins, spectrogram_with, trial_rng};
use seti_onoff::{DetectorKind, Real};

pub use config::{ExperimentConfig, Mode, SpectrogramConfig, Sweep, SweepPoint};
pub use error::CliError;
use error::ComputeContext;
use output::{add_manifest, csv_bytes, matrix_csv, write_files, PointEntry, ResolvedConfig, RocRow};
pub use run::{run_experiment, ExperimentOutput, SummaryRow};

/// Gains used by `compare` when the config has no gain sweep.
pub const DEFAULT_COMPARE_GAINS: [f64; 4] = [0.8, 0.9, 1.1, 1.25];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Roc,
    McValidate,
    Spectrogram,
    Compare,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Roc => "roc",
            Verb::McValidate => "mc-validate",
            Verb::Spectrogram => "spectrogram",
            Verb::Compare => "compare",
        }
    }
}

/// Parsed command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub verb: Verb,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub trials: Option<usize>,
}

/// What a verb wrote, plus human-readable lines for stdout.
#[derive(Debug, Clone)]
pub struct Report {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub lines: Vec<String>,
}

pub fn execute(inv: &Invocation) -> Result<Report, CliError> {
    if inv.verb == Verb::Spectrogram {
        return execute_spectrogram(inv);
    }
    let path = inv
        .config
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{} needs --config <path>", inv.verb.as_str())))?;
    let mut cfg = ExperimentConfig::from_path(path)?;
    if inv.verb == Verb::McValidate {
        cfg.mode = Mode::Both;
    }
    let cfg = cfg.with_overrides(inv.seed, inv.out.clone(), inv.trials)?;
    let (files, lines) = match inv.verb {
        Verb::Roc | Verb::McValidate => experiment_files(&cfg, inv.verb)?,
        Verb::Compare => compare_files(&cfg)?,
        Verb::Spectrogram => unreachable!("handled above"),
    };
    finish(&cfg.output_dir, files, lines)
}

fn finish(dir: &Path, files: BTreeMap<String, Vec<u8>>, lines: Vec<String>) -> Result<Report, CliError> {
    write_files(dir, &files)?;
    Ok(Report {
        out_dir: dir.to_path_buf(),
        files: files.into_keys().collect(),
        lines,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.6}"))
}

/// Output files keyed by name, and lines for stdout.
pub type VerbOutput = (BTreeMap<String, Vec<u8>>, Vec<String>);

/// Output files of `roc` / `mc-validate`, manifest included.
pub fn experiment_files(cfg: &ExperimentConfig, verb: Verb) -> Result<VerbOutput, CliError> {
    let ExperimentOutput { mut files, points } = run_experiment(cfg)?;
    let entries: Vec<PointEntry> = points
        .iter()
        .map(|r| PointEntry {
            index: r.point.index,
            scenario_id: r.point.spec.scenario_id(),
            spec: r.point.spec,
            seeds: r.seeds,
        })
        .collect();
    let lines = points
        .iter()
        .flat_map(|r| &r.summary)
        .map(|s| {
            format!(
                "point {} {} snr_db={} gain={} N={}: auc={} empirical_auc={} ks_h0={} ks_h1={}",
                s.point,
                s.detector,
                s.snr_db,
                s.gain,
                s.n_samples,
                fmt_opt(s.auc),
                fmt_opt(s.empirical_auc),
                fmt_opt(s.ks_h0),
                fmt_opt(s.ks_h1)
            )
        })
        .collect();
    add_manifest(&mut files, verb.as_str(), cfg.seed, ResolvedConfig::Experiment(cfg), &entries)?;
    Ok((files, lines))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub gain: f64,
    pub detector: DetectorKind,
    pub auc: f64,
    pub auc_delta: f64,
    pub scenario_id: String,
    pub snr_db: f64,
    pub n_samples: usize,
}

/// Output files of `compare`: AUC per gain and detector, and every curve.
pub fn compare_files(cfg: &ExperimentConfig) -> Result<VerbOutput, CliError> {
    let gains: Vec<f64> = match &cfg.sweep {
        None => DEFAULT_COMPARE_GAINS.to_vec(),
        Some(Sweep::Gain(g)) => g.clone(),
        Some(_) => return Err(CliError::Usage("compare sweeps the gain; remove the other [sweep] key or use a gain list".into())),
    };
    let spec = cfg.scenario.build(None, None, None);
    let rows = compare_detectors(&spec, &gains, cfg.pfa_grid).context(|| format!("comparing detectors for {}", spec.scenario_id()))?;

    let table: Vec<CompareRow> = rows
        .iter()
        .map(|r| CompareRow {
            gain: r.gain,
            detector: r.detector,
            auc: r.auc,
            auc_delta: r.auc_delta,
            scenario_id: spec.scenario_id(),
            snr_db: spec.snr_db(),
            n_samples: spec.n_samples,
        })
        .collect();
    let curves: Vec<RocRow> = rows
        .iter()
        .flat_map(|r| r.curve.points.iter().map(move |p| RocRow::new(p, r.detector, &spec, r.gain)))
        .collect();

    let mut lines = Vec::new();
    for det in [DetectorKind::FRatio, DetectorKind::OnOff] {
        let worst = table.iter().filter(|r| r.detector == det).map(|r| r.auc_delta.abs()).fold(0.0, f64::max);
        lines.push(format!("{det}: max |AUC(g) - AUC(1)| = {worst:.6}"));
    }

    let mut files = BTreeMap::new();
    files.insert("compare.csv".into(), csv_bytes(&table)?);
    files.insert("compare_roc.csv".into(), csv_bytes(&curves)?);
    let entry = PointEntry {
        index: 0,
        scenario_id: spec.scenario_id(),
        spec,
        seeds: None,
    };
    add_manifest(&mut files, Verb::Compare.as_str(), cfg.seed, ResolvedConfig::Experiment(cfg), &[entry])?;
    Ok((files, lines))
}

/// Spectrogram of `cfg.chirp` plus complex Gaussian noise of power
/// `cfg.noise_power`; frames × bins in natural FFT order.
pub fn spectrogram_demo(cfg: &SpectrogramConfig, seed: u64) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rng = trial_rng(seed, 0);
    let sd = (0.5 * cfg.noise_power).sqrt();
    let stream: Vec<Complex<f64>> = (0..cfg.n_samples)
        .map(|k| {
            let noise = Complex::new(f64::standard_normal(&mut rng), f64::standard_normal(&mut rng)) * sd;
            cfg.chirp.sample(k, 0.0) + noise
        })
        .collect();
    spectrogram_with(&stream, cfg.fft_len, cfg.hop, cfg.window).context(|| "spectrogram".into())
}

/// Writes the spectrogram matrix to `path` as CSV and returns it.
pub fn emit_spectrogram_demo(cfg: &SpectrogramConfig, seed: u64, path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let matrix = spectrogram_demo(cfg, seed)?;
    std::fs::write(path, matrix_csv(&matrix)?).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(matrix)
}

#[derive(Debug, Serialize)]
struct PeakRow {
    frame: usize,
    peak_bin: usize,
    peak_freq: f64,
}

fn execute_spectrogram(inv: &Invocation) -> Result<Report, CliError> {
    if inv.trials.is_some() {
        return Err(CliError::Usage("--trials does not apply to spectrogram".into()));
    }
    let (cfg, file_seed) = match &inv.config {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            SpectrogramConfig::from_toml_str(&src, &path.display().to_string())?
        }
        None => (SpectrogramConfig::default(), 0),
    };
    let seed = inv.seed.unwrap_or(file_seed);
    let matrix = spectrogram_demo(&cfg, seed)?;
    let peaks: Vec<PeakRow> = peak_bins(&matrix)
        .into_iter()
        .enumerate()
        .map(|(frame, bin)| PeakRow {
            frame,
            peak_bin: bin,
            peak_freq: bin as f64 / cfg.fft_len as f64,
        })
        .collect();
    let mut files = BTreeMap::new();
    files.insert("spectrogram.csv".into(), matrix_csv(&matrix)?);
    files.insert("spectrogram_peaks.csv".into(), csv_bytes(&peaks)?);
    add_manifest(
        &mut files,
        Verb::Spectrogram.as_str(),
        seed,
        ResolvedConfig::Spectrogram { spectrogram: &cfg, seed },
        &[],
    )?;
    let lines = vec![format!("{} frames x {} bins", matrix.len(), cfg.fft_len)];
    finish(inv.out.as_deref().unwrap_or(Path::new("out")), files, lines)
}
