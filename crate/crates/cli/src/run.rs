//! Experiment execution: analytic and simulated detector statistics per sweep point.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use seti_onoff::roc::{roc_curve, threshold_for_pfa};
use seti_onoff::scenario::detector_law;
use seti_onoff::simulator::simulate_estimates;
use seti_onoff::stats::{empirical_auc, exceedance, histogram, ks_upper_bound};
use seti_onoff::{ContinuousLaw, DetectorKind, Hypothesis, Law64, PairedEstimates, RocPoint, ScenarioSpec64, SynthOptions};

use crate::config::{ExperimentConfig, Mode, SweepPoint};
use crate::error::{CliError, ComputeContext};
use crate::output::{csv_bytes, RocRow};

/// False-alarm levels reported in the summary table.
pub const REFERENCE_PFA: [f64; 2] = [0.01, 0.1];

/// The KS column is an upper bound from at most this many cdf evaluations,
/// which adds at most `1/KS_EVALUATIONS` to the exact distance.
pub const KS_EVALUATIONS: usize = 10_000;

/// Fraction of pooled samples dropped from each end when choosing histogram limits.
const HISTOGRAM_TRIM: f64 = 1e-3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo seed for one sweep point and hypothesis.
pub fn point_seed(seed: u64, point: usize, hyp: Hypothesis) -> u64 {
    let h = match hyp {
        Hypothesis::H0 => 0,
        Hypothesis::H1 => 1,
    };
    splitmix64(seed ^ splitmix64(((point as u64) << 1) | h))
}

/// One row of `summary.csv`. Analytic columns are empty in `monte_carlo`
/// mode and empirical ones in `analytic` mode; thresholds always come from
/// the analytic null law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub point: usize,
    pub detector: DetectorKind,
    pub scenario_id: String,
    pub gain: f64,
    pub snr_db: f64,
    pub n_samples: usize,
    pub auc: Option<f64>,
    #[serde(rename = "threshold_pfa_0.01")]
    pub threshold_01: f64,
    #[serde(rename = "pd_pfa_0.01")]
    pub pd_01: Option<f64>,
    #[serde(rename = "threshold_pfa_0.1")]
    pub threshold_10: f64,
    #[serde(rename = "pd_pfa_0.1")]
    pub pd_10: Option<f64>,
    pub empirical_auc: Option<f64>,
    #[serde(rename = "empirical_pfa_0.01")]
    pub empirical_pfa_01: Option<f64>,
    #[serde(rename = "empirical_pd_0.01")]
    pub empirical_pd_01: Option<f64>,
    #[serde(rename = "empirical_pfa_0.1")]
    pub empirical_pfa_10: Option<f64>,
    #[serde(rename = "empirical_pd_0.1")]
    pub empirical_pd_10: Option<f64>,
    pub ks_h0: Option<f64>,
    pub ks_h1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub empirical_density: f64,
    pub analytic_density: f64,
}

/// Everything computed for one sweep point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub point: SweepPoint,
    pub roc: Vec<RocRow>,
    pub summary: Vec<SummaryRow>,
    /// Keyed by file name.
    pub histograms: BTreeMap<String, Vec<HistogramRow>>,
    pub seeds: Option<(u64, u64)>,
}

/// Files produced by an experiment, keyed by name, plus per-point results.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub files: BTreeMap<String, Vec<u8>>,
    pub points: Vec<PointResult>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, CliError> {
    let points = cfg.points();
    let results = points.par_iter().map(|p| run_point(cfg, p)).collect::<Result<Vec<_>, _>>()?;

    let mut files = BTreeMap::new();
    let mut summary = Vec::new();
    for r in &results {
        files.insert(format!("roc_{}.csv", r.point.index), csv_bytes(&r.roc)?);
        for (name, rows) in &r.histograms {
            files.insert(name.clone(), csv_bytes(rows)?);
        }
        summary.extend(r.summary.iter().cloned());
    }
    files.insert("summary.csv".into(), csv_bytes(&summary)?);
    Ok(ExperimentOutput { files, points: results })
}

fn context(point: &SweepPoint, what: impl std::fmt::Display) -> impl FnOnce() -> String {
    let id = point.spec.scenario_id();
    let idx = point.index;
    let what = what.to_string();
    move || format!("sweep point {idx} ({id}): {what}")
}

fn run_point(cfg: &ExperimentConfig, point: &SweepPoint) -> Result<PointResult, CliError> {
    let spec = &point.spec;
    let analytic = cfg.mode != Mode::MonteCarlo;

    let simulated = if cfg.mode.simulates() {
        let opts = SynthOptions::for_spec(spec);
        let seeds = (point_seed(cfg.seed, point.index, Hypothesis::H0), point_seed(cfg.seed, point.index, Hypothesis::H1));
        let h0 = simulate_estimates(spec, Hypothesis::H0, cfg.trials, seeds.0, &opts).context(context(point, "H0 simulation"))?;
        let h1 = simulate_estimates(spec, Hypothesis::H1, cfg.trials, seeds.1, &opts).context(context(point, "H1 simulation"))?;
        Some((seeds, h0, h1))
    } else {
        None
    };

    let mut roc = Vec::new();
    let mut summary = Vec::new();
    let mut histograms = BTreeMap::new();
    for &det in &cfg.detectors {
        let h0 = detector_law(spec, det, Hypothesis::H0).context(context(point, format!("{det} H0 law")))?;
        let h1 = detector_law(spec, det, Hypothesis::H1).context(context(point, format!("{det} H1 law")))?;
        let mut thresholds = [0.0; 2];
        let mut pds = [0.0; 2];
        for (k, &p) in REFERENCE_PFA.iter().enumerate() {
            thresholds[k] = threshold_for_pfa(&h0, p).context(context(point, format!("{det} threshold from {}", h0.describe())))?;
            pds[k] = h1.sf(thresholds[k]).context(context(point, format!("{det} detection probability from {}", h1.describe())))?;
        }

        let mut row = SummaryRow {
            point: point.index,
            detector: det,
            scenario_id: spec.scenario_id(),
            gain: spec.gain,
            snr_db: spec.snr_db(),
            n_samples: spec.n_samples,
            auc: None,
            threshold_01: thresholds[0],
            pd_01: None,
            threshold_10: thresholds[1],
            pd_10: None,
            empirical_auc: None,
            empirical_pfa_01: None,
            empirical_pd_01: None,
            empirical_pfa_10: None,
            empirical_pd_10: None,
            ks_h0: None,
            ks_h1: None,
        };

        let curve_points = if analytic {
            let curve = roc_curve(&h0, &h1, cfg.pfa_grid).context(context(point, format!("{det} ROC")))?;
            row.auc = Some(curve.auc);
            row.pd_01 = Some(pds[0]);
            row.pd_10 = Some(pds[1]);
            Some(curve.points)
        } else {
            None
        };

        let mut empirical_points = None;
        if let Some((_, est0, est1)) = &simulated {
            let s0 = stats_for(est0, det, spec, point)?;
            let s1 = stats_for(est1, det, spec, point)?;
            row.empirical_auc = Some(empirical_auc(&s0, &s1).context(context(point, format!("{det} empirical AUC")))?);
            row.empirical_pfa_01 = Some(exceedance(&s0, thresholds[0]));
            row.empirical_pd_01 = Some(exceedance(&s1, thresholds[0]));
            row.empirical_pfa_10 = Some(exceedance(&s0, thresholds[1]));
            row.empirical_pd_10 = Some(exceedance(&s1, thresholds[1]));
            let stride = (s0.len() / KS_EVALUATIONS).max(1);
            row.ks_h0 = Some(ks_upper_bound(&s0, &h0, stride).context(context(point, format!("{det} KS against {}", h0.describe())))?);
            row.ks_h1 = Some(ks_upper_bound(&s1, &h1, stride).context(context(point, format!("{det} KS against {}", h1.describe())))?);

            let (lo, hi) = histogram_limits(&s0, &s1);
            for (hyp, stats, law) in [(Hypothesis::H0, &s0, &h0), (Hypothesis::H1, &s1, &h1)] {
                let rows = histogram_rows(stats, law, lo, hi, cfg.histogram_bins).context(context(point, format!("{det} {hyp} histogram")))?;
                histograms.insert(format!("hist_{}_{}_{}.csv", point.index, det, hyp), rows);
            }
            if !analytic {
                empirical_points = Some(empirical_roc(&s0, &s1, cfg.pfa_grid));
            }
        }

        if let Some(pts) = curve_points.or(empirical_points) {
            roc.extend(pts.iter().map(|p| RocRow::new(p, det, spec, spec.gain)));
        }
        summary.push(row);
    }

    Ok(PointResult {
        point: point.clone(),
        roc,
        summary,
        histograms,
        seeds: simulated.map(|(s, _, _)| s),
    })
}

fn stats_for(est: &PairedEstimates<f64>, det: DetectorKind, spec: &ScenarioSpec64, point: &SweepPoint) -> Result<Vec<f64>, CliError> {
    est.stats(det, spec.noise_power).context(context(point, format!("{det} statistics")))
}

/// Limits covering the pooled samples minus a small trimmed fraction at each end.
fn histogram_limits(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().filter(|x| x.is_finite()).collect();
    pooled.sort_by(f64::total_cmp);
    let n = pooled.len();
    let k = ((n as f64) * HISTOGRAM_TRIM) as usize;
    let (lo, hi) = (pooled[k.min(n - 1)], pooled[(n - 1).saturating_sub(k)]);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// Empirical densities beside the law's bin-averaged density `ΔF / width`.
pub fn histogram_rows(stats: &[f64], law: &Law64, lo: f64, hi: f64, bins: usize) -> seti_onoff::Result<Vec<HistogramRow>> {
    let density = histogram(stats, lo, hi, bins)?;
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| if k == bins { hi } else { lo + width * k as f64 }).collect();
    let cdf = edges.iter().map(|&e| law.cdf(e)).collect::<seti_onoff::Result<Vec<f64>>>()?;
    Ok((0..bins)
        .map(|k| HistogramRow {
            bin_left: edges[k],
            bin_right: edges[k + 1],
            empirical_density: density[k],
            analytic_density: ((cdf[k + 1] - cdf[k]) / (edges[k + 1] - edges[k])).max(0.0),
        })
        .collect())
}

/// ROC from samples: thresholds at the empirical null quantiles for the
/// same false-alarm levels as the analytic grid, plus the largest null sample.
pub fn empirical_roc(h0: &[f64], h1: &[f64], grid: usize) -> Vec<RocPoint<f64>> {
    let mut sorted = h0.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut points = vec![RocPoint {
        threshold: f64::NEG_INFINITY,
        pfa: 1.0,
        pd: 1.0,
    }];
    for i in (1..=grid).rev() {
        let target = i as f64 / (grid + 1) as f64;
        let idx = (((1.0 - target) * n as f64).ceil() as usize).clamp(1, n) - 1;
        let threshold = sorted[idx];
        points.push(RocPoint {
            threshold,
            pfa: exceedance(h0, threshold),
            pd: exceedance(h1, threshold),
        });
    }
    // largest null sample: no false alarms left
    let top = sorted[n - 1];
    points.push(RocPoint {
        threshold: top,
        pfa: 0.0,
        pd: exceedance(h1, top),
    });
    points.push(RocPoint {
        threshold: f64::INFINITY,
        pfa: 0.0,
        pd: 0.0,
    });
    points
}
