//! Detection/false-alarm trade-off from analytic laws.
//!
//! All detectors declare H1 when the statistic exceeds the threshold.

use serde::Serialize;

use crate::distributions::{ContinuousLaw, Law};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::scenario::{detector_law, DetectorKind, Hypothesis, ScenarioSpec};

/// Geometric refinement levels toward pfa → 0 and pfa → 1.
const TAIL_REFINEMENT: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint<T> {
    pub threshold: T,
    pub pfa: T,
    pub pd: T,
}

/// Points sorted by increasing threshold (decreasing pfa), including the
/// `(1, 1)` and `(0, 0)` end points at thresholds `-∞` and `+∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve<T> {
    pub points: Vec<RocPoint<T>>,
    pub auc: T,
    pub detector: Option<DetectorKind>,
    pub spec: Option<ScenarioSpec<T>>,
}

impl<T: Real> RocCurve<T> {
    /// Detection probability at the point closest to `pfa`.
    pub fn pd_near(&self, pfa: T) -> T {
        self.points
            .iter()
            .min_by(|a, b| (a.pfa - pfa).abs().partial_cmp(&(b.pfa - pfa).abs()).expect("finite pfa"))
            .map(|p| p.pd)
            .unwrap_or(T::nan())
    }
}

/// `(pd, pfa)` at `threshold`.
pub fn pd_pfa<T: Real, L0: ContinuousLaw<T>, L1: ContinuousLaw<T>>(h0: &L0, h1: &L1, threshold: T) -> Result<(T, T)> {
    let pd = h1.sf(threshold).map_err(|e| e.in_law(h1.describe()))?;
    let pfa = h0.sf(threshold).map_err(|e| e.in_law(h0.describe()))?;
    Ok((pd.clamp(T::zero(), T::one()), pfa.clamp(T::zero(), T::one())))
}

/// CFAR threshold: the `1 - target_pfa` quantile of the null law.
pub fn threshold_for_pfa<T: Real, L: ContinuousLaw<T>>(h0: &L, target_pfa: T) -> Result<T> {
    if !(target_pfa > T::zero() && target_pfa < T::one()) {
        return Err(Error::domain(format!("target pfa must lie in (0, 1), got {target_pfa}")));
    }
    h0.quantile(T::one() - target_pfa)
}

/// False-alarm levels: `grid` equispaced interior points plus geometric
/// steps toward both ends so the trapezoid AUC is not limited by the ends.
fn pfa_levels<T: Real>(grid: usize) -> Vec<T> {
    let step = T::one() / from_usize::<T>(grid + 1);
    let mut levels: Vec<T> = (1..=grid).map(|i| from_usize::<T>(i) * step).collect();
    let mut tail = step;
    for _ in 0..TAIL_REFINEMENT {
        tail = tail * lit(0.5);
        levels.push(tail);
        levels.push(T::one() - tail);
    }
    levels.sort_by(|a, b| b.partial_cmp(a).expect("finite levels"));
    levels.dedup();
    levels
}

pub fn roc_curve<T: Real, L0: ContinuousLaw<T>, L1: ContinuousLaw<T>>(h0: &L0, h1: &L1, grid: usize) -> Result<RocCurve<T>> {
    if grid < 2 {
        return Err(Error::validation(format!("ROC grid must be >= 2, got {grid}")));
    }
    let mut points = vec![RocPoint {
        threshold: T::neg_infinity(),
        pfa: T::one(),
        pd: T::one(),
    }];
    for target in pfa_levels::<T>(grid) {
        let threshold = threshold_for_pfa(h0, target).map_err(|e| e.in_law(h0.describe()))?;
        let (pd, pfa) = pd_pfa(h0, h1, threshold)?;
        points.push(RocPoint { threshold, pfa, pd });
    }
    points.push(RocPoint {
        threshold: T::infinity(),
        pfa: T::zero(),
        pd: T::zero(),
    });
    let auc = trapezoid_auc(&points);
    Ok(RocCurve {
        points,
        auc,
        detector: None,
        spec: None,
    })
}

/// Trapezoid area under `pd(pfa)`; points may come in any order.
pub fn trapezoid_auc<T: Real>(points: &[RocPoint<T>]) -> T {
    let mut pts: Vec<(T, T)> = points.iter().map(|p| (p.pfa, p.pd)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
    pts.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) * lit(0.5))
        .sum()
}

/// ROC of one detector under one scenario.
pub fn detector_roc<T: Real>(spec: &ScenarioSpec<T>, kind: DetectorKind, grid: usize) -> Result<RocCurve<T>> {
    let h0: Law<T> = detector_law(spec, kind, Hypothesis::H0)?;
    let h1: Law<T> = detector_law(spec, kind, Hypothesis::H1)?;
    let mut curve = roc_curve(&h0, &h1, grid)?;
    curve.detector = Some(kind);
    curve.spec = Some(*spec);
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow<T> {
    pub gain: T,
    pub detector: DetectorKind,
    pub auc: T,
    /// `auc(gain) - auc(1)`.
    pub auc_delta: T,
    pub curve: RocCurve<T>,
}

/// F-ratio and ON−OFF ROC curves with the spec's gain replaced by each of `gains`.
pub fn compare_detectors<T: Real>(spec: &ScenarioSpec<T>, gains: &[T], grid: usize) -> Result<Vec<ComparisonRow<T>>> {
    if gains.is_empty() {
        return Err(Error::validation("compare_detectors needs at least one gain"));
    }
    let detectors = [DetectorKind::FRatio, DetectorKind::OnOff];
    let mut reference = Vec::with_capacity(detectors.len());
    for kind in detectors {
        reference.push(detector_roc(&spec.with_gain(T::one()), kind, grid)?.auc);
    }
    let mut rows = Vec::with_capacity(gains.len() * detectors.len());
    for &gain in gains {
        for (kind, &auc_ref) in detectors.iter().zip(&reference) {
            let curve = detector_roc(&spec.with_gain(gain), *kind, grid)?;
            rows.push(ComparisonRow {
                gain,
                detector: *kind,
                auc: curve.auc,
                auc_delta: curve.auc - auc_ref,
                curve,
            });
        }
    }
    Ok(rows)
}
