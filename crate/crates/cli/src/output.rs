//! CSV rows, the run manifest and file writing.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use seti_onoff::{DetectorKind, RocPoint, ScenarioSpec64};

use crate::config::{ExperimentConfig, SpectrogramConfig};
use crate::error::CliError;

pub const MANIFEST: &str = "manifest.json";

/// One row of a ROC CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocRow {
    pub threshold: f64,
    pub pfa: f64,
    pub pd: f64,
    pub detector: DetectorKind,
    pub scenario_id: String,
    pub gain: f64,
    pub snr_db: f64,
    pub n_samples: usize,
}

impl RocRow {
    pub fn new(p: &RocPoint<f64>, detector: DetectorKind, spec: &ScenarioSpec64, gain: f64) -> Self {
        Self {
            threshold: p.threshold,
            pfa: p.pfa,
            pd: p.pd,
            detector,
            scenario_id: spec.scenario_id(),
            gain,
            snr_db: spec.snr_db(),
            n_samples: spec.n_samples,
        }
    }
}

pub fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(&e))?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("CSV buffer: {e}")))
}

fn csv_error(e: &csv::Error) -> CliError {
    CliError::Usage(format!("CSV serialization: {e}"))
}

/// Header plus one row per frame: `frame,bin_0,..,bin_{L-1}`.
pub fn matrix_csv(rows: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let bins = rows.first().map_or(0, Vec::len);
    let mut header = vec!["frame".to_string()];
    header.extend((0..bins).map(|k| format!("bin_{k}")));
    w.write_record(&header).map_err(|e| csv_error(&e))?;
    for (f, row) in rows.iter().enumerate() {
        let mut rec = vec![f.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(|e| csv_error(&e))?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("CSV buffer: {e}")))
}

#[derive(Debug, Serialize)]
struct FileEntry<'a> {
    name: &'a str,
    bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct PointEntry {
    pub index: usize,
    pub scenario_id: String,
    pub spec: ScenarioSpec64,
    /// `(H0, H1)` Monte Carlo seeds, when simulated.
    pub seeds: Option<(u64, u64)>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum ResolvedConfig<'a> {
    Experiment(&'a ExperimentConfig),
    Spectrogram { spectrogram: &'a SpectrogramConfig, seed: u64 },
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    verb: &'a str,
    seed: u64,
    config: ResolvedConfig<'a>,
    /// Re-runnable config in TOML form.
    #[serde(skip_serializing_if = "Option::is_none")]
    config_toml: Option<String>,
    points: &'a [PointEntry],
    files: Vec<FileEntry<'a>>,
}

/// Adds `manifest.json`, listing every other file in name order.
pub fn add_manifest(
    files: &mut BTreeMap<String, Vec<u8>>,
    verb: &str,
    seed: u64,
    config: ResolvedConfig<'_>,
    points: &[PointEntry],
) -> Result<(), CliError> {
    let config_toml = match config {
        ResolvedConfig::Experiment(cfg) => Some(cfg.to_toml()),
        ResolvedConfig::Spectrogram { .. } => None,
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        verb,
        seed,
        config,
        config_toml,
        points,
        files: files.iter().map(|(name, body)| FileEntry { name, bytes: body.len() }).collect(),
    };
    let mut body = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Usage(format!("manifest: {e}")))?;
    body.push(b'\n');
    files.insert(MANIFEST.into(), body);
    Ok(())
}

/// Writes files one at a time, creating `dir` if needed.
pub fn write_files(dir: &Path, files: &BTreeMap<String, Vec<u8>>) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(io(&path))?;
    }
    Ok(())
}
