//! TOML experiment configuration.
//!
//! ```toml
//! [scenario]
//! n_samples = 64
//! rfi_kind = "wideband"   # wideband | narrowband | none
//! inr_db = 0.0            # or rfi_power (wideband) / rfi_energy (narrowband)
//! et_kind = "wideband"    # wideband | narrowband
//! snr_db = 0.0            # or et_power / et_energy
//! gain = 1.0
//!
//! [experiment]
//! detectors = ["f_ratio", "on_off"]
//! mode = "both"           # analytic | monte_carlo | both
//! trials = 100000
//! seed = 7
//!
//! [sweep]
//! snr_db = [0.0, 2.51]    # exactly one of snr_db, gain, n_samples
//! ```
//!
//! Linear powers and energies are taken as given; dB values are converted
//! with `10^(dB/10)` when the scenario for a sweep point is built.

use std::ops::Range;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use seti_onoff::simulator::Window;
use seti_onoff::{ChirpParams, DetectorKind, EtKind, RfiKind, ScenarioSpec64};
use toml::Spanned;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Analytic,
    MonteCarlo,
    Both,
}

impl Mode {
    pub fn simulates(self) -> bool {
        self != Mode::Analytic
    }
}

/// The one parameter varied across sweep points.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    SnrDb(Vec<f64>),
    Gain(Vec<f64>),
    NSamples(Vec<usize>),
}

/// Base scenario plus the dB targets that are re-applied at every sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioTemplate {
    pub base: ScenarioSpec64,
    pub snr_db: Option<f64>,
    pub inr_db: Option<f64>,
}

impl ScenarioTemplate {
    pub fn build(&self, n_samples: Option<usize>, gain: Option<f64>, snr_db: Option<f64>) -> ScenarioSpec64 {
        let mut spec = self.base;
        if let Some(n) = n_samples {
            spec = spec.with_n_samples(n);
        }
        if let Some(g) = gain {
            spec = spec.with_gain(g);
        }
        if let Some(db) = self.inr_db {
            spec = spec.with_inr_db(db);
        }
        if let Some(db) = snr_db.or(self.snr_db) {
            spec = spec.with_snr_db(db);
        }
        spec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrogramConfig {
    pub chirp: ChirpParams<f64>,
    pub noise_power: f64,
    pub n_samples: usize,
    pub fft_len: usize,
    pub hop: usize,
    pub window: Window,
}

impl Default for SpectrogramConfig {
    fn default() -> Self {
        Self {
            chirp: ChirpParams::tone(1.0, 0.125),
            noise_power: 0.1,
            n_samples: 16_384,
            fft_len: 256,
            hop: 128,
            window: Window::Rectangular,
        }
    }
}

impl SpectrogramConfig {
    /// Reads `[spectrogram]` and `[experiment].seed` from a config document.
    pub fn from_toml_str(src: &str, path: &str) -> Result<(Self, u64), CliError> {
        let raw: RawSpectrogramDoc = toml::from_str(src).map_err(|e| parse_error(src, path, &e))?;
        let ctx = Ctx { src, path };
        let seed = raw.experiment.and_then(|e| e.seed).unwrap_or(0);
        let cfg = raw.spectrogram.map(|s| s.resolve(&ctx)).transpose()?.unwrap_or_default();
        Ok((cfg, seed))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: ScenarioTemplate,
    pub detectors: Vec<DetectorKind>,
    pub mode: Mode,
    pub trials: usize,
    pub seed: u64,
    pub pfa_grid: usize,
    pub histogram_bins: usize,
    pub sweep: Option<Sweep>,
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub spectrogram: Option<SpectrogramConfig>,
}

/// One resolved point of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub spec: ScenarioSpec64,
}

pub const MIN_MONTE_CARLO_TRIALS: usize = 1_000;

impl ExperimentConfig {
    pub fn points(&self) -> Vec<SweepPoint> {
        let specs: Vec<ScenarioSpec64> = match &self.sweep {
            None => vec![self.scenario.build(None, None, None)],
            Some(Sweep::SnrDb(v)) => v.iter().map(|&db| self.scenario.build(None, None, Some(db))).collect(),
            Some(Sweep::Gain(v)) => v.iter().map(|&g| self.scenario.build(None, Some(g), None)).collect(),
            Some(Sweep::NSamples(v)) => v.iter().map(|&n| self.scenario.build(Some(n), None, None)).collect(),
        };
        specs.into_iter().enumerate().map(|(index, spec)| SweepPoint { index, spec }).collect()
    }

    /// Applies command-line overrides and re-checks the constraints they touch.
    pub fn with_overrides(mut self, seed: Option<u64>, out: Option<PathBuf>, trials: Option<usize>) -> Result<Self, CliError> {
        if let Some(s) = seed {
            if s > i64::MAX as u64 {
                return Err(CliError::Usage(format!("--seed must be <= {}, got {s}", i64::MAX)));
            }
            self.seed = s;
        }
        if let Some(o) = out {
            self.output_dir = o;
        }
        if let Some(t) = trials {
            self.trials = t;
        }
        self.check_trials().map_err(|msg| CliError::Usage(format!("--trials: {msg}")))?;
        Ok(self)
    }

    pub fn with_mode(mut self, mode: Mode) -> Result<Self, CliError> {
        self.mode = mode;
        self.check_trials().map_err(|msg| CliError::Usage(format!("trials: {msg}")))?;
        Ok(self)
    }

    fn check_trials(&self) -> Result<(), String> {
        if self.trials == 0 {
            return Err("must be >= 1".into());
        }
        if self.mode.simulates() && self.trials < MIN_MONTE_CARLO_TRIALS {
            return Err(format!("must be >= {MIN_MONTE_CARLO_TRIALS} when Monte Carlo runs, got {}", self.trials));
        }
        Ok(())
    }

    pub fn from_toml_str(src: &str, path: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| parse_error(src, path, &e))?;
        let ctx = Ctx { src, path };
        raw.resolve(&ctx)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&src, &path.display().to_string())
    }
}

impl ExperimentConfig {
    /// Canonical TOML that parses back to this configuration (except
    /// `output_dir`, which is left to the command line).
    pub fn to_toml(&self) -> String {
        let base = &self.scenario.base;
        let rfi_power = (base.rfi_kind == RfiKind::Wideband && self.scenario.inr_db.is_none()).then_some(base.rfi_power);
        let rfi_energy = (base.rfi_kind == RfiKind::Narrowband && self.scenario.inr_db.is_none()).then_some(base.rfi_energy);
        let et_power = (base.et_kind == EtKind::Wideband && self.scenario.snr_db.is_none()).then_some(base.et_power);
        let et_energy = (base.et_kind == EtKind::Narrowband && self.scenario.snr_db.is_none()).then_some(base.et_energy);
        let doc = OutConfig {
            scenario: OutScenario {
                n_samples: base.n_samples,
                noise_power: base.noise_power,
                rfi_kind: base.rfi_kind,
                rfi_power,
                rfi_energy,
                inr_db: self.scenario.inr_db,
                et_kind: base.et_kind,
                et_power,
                et_energy,
                snr_db: self.scenario.snr_db,
                gain: base.gain,
            },
            experiment: OutExperiment {
                detectors: &self.detectors,
                mode: self.mode,
                trials: self.trials,
                seed: self.seed,
                pfa_grid: self.pfa_grid,
                histogram_bins: self.histogram_bins,
            },
            sweep: self.sweep.as_ref(),
            spectrogram: self.spectrogram.as_ref().map(|s| OutSpectrogram {
                amplitude: s.chirp.amplitude,
                start_freq: s.chirp.start_freq,
                drift_rate: s.chirp.drift_rate,
                phase0: s.chirp.phase0,
                noise_power: s.noise_power,
                n_samples: s.n_samples,
                fft_len: s.fft_len,
                hop: s.hop,
                window: s.window,
            }),
        };
        toml::to_string(&doc).expect("config renders as TOML")
    }
}

#[derive(Serialize)]
struct OutConfig<'a> {
    scenario: OutScenario,
    experiment: OutExperiment<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<&'a Sweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrogram: Option<OutSpectrogram>,
}

#[derive(Serialize)]
struct OutScenario {
    n_samples: usize,
    noise_power: f64,
    rfi_kind: RfiKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    rfi_power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rfi_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inr_db: Option<f64>,
    et_kind: EtKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    et_power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    et_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snr_db: Option<f64>,
    gain: f64,
}

#[derive(Serialize)]
struct OutExperiment<'a> {
    detectors: &'a [DetectorKind],
    mode: Mode,
    trials: usize,
    seed: u64,
    pfa_grid: usize,
    histogram_bins: usize,
}

#[derive(Serialize)]
struct OutSpectrogram {
    amplitude: f64,
    start_freq: f64,
    drift_rate: f64,
    phase0: f64,
    noise_power: f64,
    n_samples: usize,
    fft_len: usize,
    hop: usize,
    window: Window,
}

fn parse_error(src: &str, path: &str, e: &toml::de::Error) -> CliError {
    let (line, col) = e.span().map(|s| locate(src, s.start)).unwrap_or((1, 1));
    CliError::Config {
        path: path.into(),
        line,
        col,
        msg: e.message().trim().to_string(),
    }
}

/// 1-based line and column of a byte offset.
fn locate(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, col)
}

struct Ctx<'a> {
    src: &'a str,
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, span: Range<usize>, msg: impl Into<String>) -> CliError {
        let (line, col) = locate(self.src, span.start);
        CliError::Config {
            path: self.path.into(),
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Spanned<RawScenario>,
    experiment: Option<RawExperiment>,
    sweep: Option<Spanned<RawSweep>>,
    spectrogram: Option<RawSpectrogram>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    n_samples: Spanned<i64>,
    noise_power: Option<Spanned<f64>>,
    rfi_kind: Option<Spanned<RfiKind>>,
    rfi_power: Option<Spanned<f64>>,
    rfi_energy: Option<Spanned<f64>>,
    inr_db: Option<Spanned<f64>>,
    et_kind: Option<Spanned<EtKind>>,
    et_power: Option<Spanned<f64>>,
    et_energy: Option<Spanned<f64>>,
    snr_db: Option<Spanned<f64>>,
    gain: Option<Spanned<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    detectors: Option<Spanned<Vec<DetectorKind>>>,
    mode: Option<Spanned<Mode>>,
    trials: Option<Spanned<i64>>,
    seed: Option<Spanned<u64>>,
    pfa_grid: Option<Spanned<i64>>,
    histogram_bins: Option<Spanned<i64>>,
    output_dir: Option<Spanned<String>>,
}

/// Just the parts of a config the spectrogram demo reads; other tables are ignored.
#[derive(Deserialize)]
struct RawSpectrogramDoc {
    spectrogram: Option<RawSpectrogram>,
    experiment: Option<RawSeedOnly>,
}

#[derive(Deserialize)]
struct RawSeedOnly {
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    snr_db: Option<Spanned<Vec<f64>>>,
    gain: Option<Spanned<Vec<f64>>>,
    n_samples: Option<Spanned<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrogram {
    amplitude: Option<Spanned<f64>>,
    start_freq: Option<f64>,
    drift_rate: Option<f64>,
    phase0: Option<f64>,
    noise_power: Option<Spanned<f64>>,
    n_samples: Option<Spanned<i64>>,
    fft_len: Option<Spanned<i64>>,
    hop: Option<Spanned<i64>>,
    window: Option<Window>,
}

fn positive_int(ctx: &Ctx, v: &Spanned<i64>, name: &str) -> Result<usize, CliError> {
    usize::try_from(*v.get_ref())
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| ctx.err(v.span(), format!("{name} must be a positive integer, got {}", v.get_ref())))
}

fn non_negative(ctx: &Ctx, v: &Spanned<f64>, name: &str) -> Result<f64, CliError> {
    let x = *v.get_ref();
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(ctx.err(v.span(), format!("{name} must be finite and >= 0, got {x}")))
    }
}

fn finite(ctx: &Ctx, v: &Spanned<f64>, name: &str) -> Result<f64, CliError> {
    let x = *v.get_ref();
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ctx.err(v.span(), format!("{name} must be finite, got {x}")))
    }
}

impl RawConfig {
    fn resolve(self, ctx: &Ctx) -> Result<ExperimentConfig, CliError> {
        let scenario_span = self.scenario.span();
        let scenario = self.scenario.into_inner().resolve(ctx)?;

        let exp = self.experiment.unwrap_or(RawExperiment {
            detectors: None,
            mode: None,
            trials: None,
            seed: None,
            pfa_grid: None,
            histogram_bins: None,
            output_dir: None,
        });
        let detectors = match &exp.detectors {
            None => vec![DetectorKind::FRatio, DetectorKind::OnOff],
            Some(d) => {
                let list = d.get_ref().clone();
                if list.is_empty() {
                    return Err(ctx.err(d.span(), "detectors must not be empty"));
                }
                let mut seen = list.clone();
                seen.sort();
                seen.dedup();
                if seen.len() != list.len() {
                    return Err(ctx.err(d.span(), "detectors must not repeat"));
                }
                list
            }
        };
        let mode = exp.mode.as_ref().map_or(Mode::Analytic, |m| *m.get_ref());
        let trials = match &exp.trials {
            None => 100_000,
            Some(t) => {
                let n = positive_int(ctx, t, "trials")?;
                if mode.simulates() && n < MIN_MONTE_CARLO_TRIALS {
                    return Err(ctx.err(t.span(), format!("trials must be >= {MIN_MONTE_CARLO_TRIALS} when Monte Carlo runs, got {n}")));
                }
                n
            }
        };
        let pfa_grid = match &exp.pfa_grid {
            None => 200,
            Some(g) => {
                let n = positive_int(ctx, g, "pfa_grid")?;
                if n < 2 {
                    return Err(ctx.err(g.span(), "pfa_grid must be >= 2"));
                }
                n
            }
        };
        let histogram_bins = exp.histogram_bins.as_ref().map(|b| positive_int(ctx, b, "histogram_bins")).transpose()?.unwrap_or(50);
        let seed = exp.seed.as_ref().map_or(0, |s| *s.get_ref());
        let output_dir = PathBuf::from(exp.output_dir.as_ref().map_or("out", |o| o.get_ref().as_str()));

        let sweep = self.sweep.map(|s| resolve_sweep(ctx, s)).transpose()?;
        let points_check = ExperimentConfig {
            scenario,
            detectors,
            mode,
            trials,
            seed,
            pfa_grid,
            histogram_bins,
            sweep,
            output_dir,
            spectrogram: self.spectrogram.map(|s| s.resolve(ctx)).transpose()?,
        };
        for p in points_check.points() {
            p.spec.validate().map_err(|e| ctx.err(scenario_span.clone(), format!("sweep point {}: {e}", p.index)))?;
        }
        Ok(points_check)
    }
}

fn resolve_sweep(ctx: &Ctx, s: Spanned<RawSweep>) -> Result<Sweep, CliError> {
    let span = s.span();
    let raw = s.into_inner();
    let given = [raw.snr_db.is_some(), raw.gain.is_some(), raw.n_samples.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err(ctx.err(span, format!("[sweep] must set exactly one of snr_db, gain, n_samples (found {given})")));
    }
    if let Some(v) = raw.snr_db {
        if v.get_ref().is_empty() || v.get_ref().iter().any(|x| !x.is_finite()) {
            return Err(ctx.err(v.span(), "snr_db sweep must be a non-empty list of finite values"));
        }
        return Ok(Sweep::SnrDb(v.into_inner()));
    }
    if let Some(v) = raw.gain {
        if v.get_ref().is_empty() || v.get_ref().iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(ctx.err(v.span(), "gain sweep must be a non-empty list of values >= 0"));
        }
        return Ok(Sweep::Gain(v.into_inner()));
    }
    let v = raw.n_samples.expect("one sweep key present");
    let ns: Option<Vec<usize>> = v.get_ref().iter().map(|&n| usize::try_from(n).ok().filter(|&n| n >= 1)).collect();
    match ns {
        Some(ns) if !ns.is_empty() => Ok(Sweep::NSamples(ns)),
        _ => Err(ctx.err(v.span(), "n_samples sweep must be a non-empty list of positive integers")),
    }
}

impl RawScenario {
    fn resolve(self, ctx: &Ctx) -> Result<ScenarioTemplate, CliError> {
        let n = positive_int(ctx, &self.n_samples, "n_samples")?;
        let mut spec = ScenarioSpec64::new(n);
        if let Some(p) = &self.noise_power {
            let x = non_negative(ctx, p, "noise_power")?;
            if x == 0.0 {
                return Err(ctx.err(p.span(), "noise_power must be > 0"));
            }
            spec = spec.with_noise_power(x);
        }
        if let Some(g) = &self.gain {
            spec = spec.with_gain(non_negative(ctx, g, "gain")?);
        }

        let rfi_kind = self.rfi_kind.as_ref().map_or(RfiKind::None, |k| *k.get_ref());
        let strength_keys = [("rfi_power", &self.rfi_power), ("rfi_energy", &self.rfi_energy), ("inr_db", &self.inr_db)];
        let set: Vec<_> = strength_keys.iter().filter_map(|(name, v)| v.as_ref().map(|v| (*name, v))).collect();
        if set.len() > 1 {
            return Err(ctx.err(set[1].1.span(), format!("set only one of rfi_power, rfi_energy, inr_db (also found {})", set[0].0)));
        }
        let mut inr_db = None;
        match (rfi_kind, set.first()) {
            (RfiKind::None, Some((name, v))) => return Err(ctx.err(v.span(), format!("{name} given but rfi_kind = \"none\""))),
            (RfiKind::None, None) => {}
            (RfiKind::Wideband, Some(("rfi_energy", v))) => return Err(ctx.err(v.span(), "wideband RFI takes rfi_power, not rfi_energy")),
            (RfiKind::Narrowband, Some(("rfi_power", v))) => return Err(ctx.err(v.span(), "narrowband RFI takes rfi_energy, not rfi_power")),
            (kind, Some((name, v))) => {
                if *name == "inr_db" {
                    inr_db = Some(finite(ctx, v, name)?);
                    spec = if kind == RfiKind::Wideband { spec.with_wideband_rfi(0.0) } else { spec.with_narrowband_rfi(0.0) };
                } else {
                    let x = non_negative(ctx, v, name)?;
                    spec = if kind == RfiKind::Wideband { spec.with_wideband_rfi(x) } else { spec.with_narrowband_rfi(x) };
                }
            }
            (RfiKind::Wideband, None) => spec = spec.with_wideband_rfi(0.0),
            (RfiKind::Narrowband, None) => spec = spec.with_narrowband_rfi(0.0),
        }

        let et_kind = self.et_kind.as_ref().map_or(EtKind::Wideband, |k| *k.get_ref());
        let strength_keys = [("et_power", &self.et_power), ("et_energy", &self.et_energy), ("snr_db", &self.snr_db)];
        let set: Vec<_> = strength_keys.iter().filter_map(|(name, v)| v.as_ref().map(|v| (*name, v))).collect();
        if set.len() > 1 {
            return Err(ctx.err(set[1].1.span(), format!("set only one of et_power, et_energy, snr_db (also found {})", set[0].0)));
        }
        spec = match et_kind {
            EtKind::Wideband => spec.with_wideband_et(0.0),
            EtKind::Narrowband => spec.with_narrowband_et(0.0),
        };
        let mut snr_db = None;
        match (et_kind, set.first()) {
            (EtKind::Wideband, Some(("et_energy", v))) => return Err(ctx.err(v.span(), "wideband ET takes et_power, not et_energy")),
            (EtKind::Narrowband, Some(("et_power", v))) => return Err(ctx.err(v.span(), "narrowband ET takes et_energy, not et_power")),
            (_, Some(("snr_db", v))) => snr_db = Some(finite(ctx, v, "snr_db")?),
            (EtKind::Wideband, Some((name, v))) => spec = spec.with_wideband_et(non_negative(ctx, v, name)?),
            (EtKind::Narrowband, Some((name, v))) => spec = spec.with_narrowband_et(non_negative(ctx, v, name)?),
            (_, None) => {}
        }
        Ok(ScenarioTemplate { base: spec, snr_db, inr_db })
    }
}

impl RawSpectrogram {
    fn resolve(self, ctx: &Ctx) -> Result<SpectrogramConfig, CliError> {
        let amplitude = self.amplitude.as_ref().map(|a| non_negative(ctx, a, "amplitude")).transpose()?.unwrap_or(1.0);
        let noise_power = self.noise_power.as_ref().map(|p| non_negative(ctx, p, "noise_power")).transpose()?.unwrap_or(0.1);
        let n_samples = self.n_samples.as_ref().map(|v| positive_int(ctx, v, "n_samples")).transpose()?.unwrap_or(16_384);
        let fft_len = self.fft_len.as_ref().map(|v| positive_int(ctx, v, "fft_len")).transpose()?.unwrap_or(256);
        let hop = self.hop.as_ref().map(|v| positive_int(ctx, v, "hop")).transpose()?.unwrap_or(fft_len / 2);
        if fft_len > n_samples {
            let span = self.fft_len.as_ref().map_or(0..0, |v| v.span());
            return Err(ctx.err(span, format!("fft_len {fft_len} exceeds n_samples {n_samples}")));
        }
        Ok(SpectrogramConfig {
            chirp: ChirpParams {
                amplitude,
                start_freq: self.start_freq.unwrap_or(0.125),
                drift_rate: self.drift_rate.unwrap_or(0.0),
                phase0: self.phase0.unwrap_or(0.0),
            },
            noise_power,
            n_samples,
            fft_len,
            hop: hop.max(1),
            window: self.window.unwrap_or_default(),
        })
    }
}
