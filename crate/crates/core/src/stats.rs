//! Empirical summaries used to check analytic laws against simulation.

use crate::distributions::ContinuousLaw;
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

fn sorted<T: Real>(samples: &[T]) -> Result<Vec<T>> {
    if samples.is_empty() {
        return Err(Error::validation("empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::validation("sample contains NaN"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN filtered"));
    Ok(xs)
}

/// Exact one-sample Kolmogorov–Smirnov distance.
pub fn ks_statistic<T: Real, L: ContinuousLaw<T>>(samples: &[T], law: &L) -> Result<T> {
    ks_upper_bound(samples, law, 1)
}

/// Upper bound on the KS distance from cdf evaluations at every `stride`-th
/// order statistic (plus the last). Exact for `stride == 1`.
///
/// Between evaluated order statistics `x_(a) ≤ t < x_(b)` the empirical cdf
/// lies in `[a/n, (b-1)/n]` and the law's cdf in `[F(x_(a)), F(x_(b))]`.
pub fn ks_upper_bound<T: Real, L: ContinuousLaw<T>>(samples: &[T], law: &L, stride: usize) -> Result<T> {
    let xs = sorted(samples)?;
    let n = xs.len();
    let nf = from_usize::<T>(n);
    let stride = stride.max(1);
    let mut idx: Vec<usize> = (0..n).step_by(stride).collect();
    if *idx.last().expect("non-empty") != n - 1 {
        idx.push(n - 1);
    }
    let cdfs = idx.iter().map(|&i| law.cdf(xs[i])).collect::<Result<Vec<T>>>()?;

    // below the first sample and above the last
    let mut d = cdfs[0].max(T::one() - cdfs[cdfs.len() - 1]);
    for w in 0..idx.len() {
        let a = idx[w] + 1; // 1-based rank
        let ecdf_lo = from_usize::<T>(a) / nf;
        let ecdf_at_prev = from_usize::<T>(a - 1) / nf;
        d = d.max(cdfs[w] - ecdf_at_prev).max(ecdf_lo - cdfs[w]);
        if w + 1 < idx.len() {
            let b = idx[w + 1] + 1;
            let ecdf_hi = from_usize::<T>(b - 1) / nf;
            d = d.max(ecdf_hi - cdfs[w]).max(cdfs[w + 1] - ecdf_lo);
        }
    }
    Ok(d)
}

/// Fraction of samples strictly above `threshold`.
pub fn exceedance<T: Real>(samples: &[T], threshold: T) -> T {
    let count = samples.iter().filter(|&&x| x > threshold).count();
    from_usize::<T>(count) / from_usize::<T>(samples.len().max(1))
}

/// Standard error of a binomial proportion.
pub fn binomial_se<T: Real>(p: T, n: usize) -> T {
    (p * (T::one() - p) / from_usize::<T>(n.max(1))).sqrt()
}

pub fn mean<T: Real>(samples: &[T]) -> T {
    samples.iter().copied().sum::<T>() / from_usize::<T>(samples.len().max(1))
}

/// Unbiased sample variance.
pub fn variance<T: Real>(samples: &[T]) -> T {
    let m = mean(samples);
    let ss: T = samples.iter().map(|&x| (x - m) * (x - m)).sum();
    ss / from_usize::<T>(samples.len().saturating_sub(1).max(1))
}

pub fn median<T: Real>(samples: &[T]) -> Result<T> {
    let xs = sorted(samples)?;
    let n = xs.len();
    Ok(if n % 2 == 1 { xs[n / 2] } else { (xs[n / 2 - 1] + xs[n / 2]) * lit(0.5) })
}

/// Empirical AUC: `P(X₁ > X₀) + ½ P(X₁ = X₀)` via rank counting.
pub fn empirical_auc<T: Real>(h0: &[T], h1: &[T]) -> Result<T> {
    let a = sorted(h0)?;
    let b = sorted(h1)?;
    // for each H1 value count H0 values below it, and ties
    let (mut below, mut j, mut total) = (0usize, 0usize, T::zero());
    for &x in &b {
        while below < a.len() && a[below] < x {
            below += 1;
        }
        j = j.max(below);
        while j < a.len() && a[j] == x {
            j += 1;
        }
        let ties = j - below;
        total = total + from_usize::<T>(below) + lit::<T>(0.5) * from_usize::<T>(ties);
    }
    Ok(total / (from_usize::<T>(a.len()) * from_usize::<T>(b.len())))
}

/// Equal-width histogram normalized to a density.
pub fn histogram<T: Real>(samples: &[T], lo: T, hi: T, bins: usize) -> Result<Vec<T>> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::validation(format!("histogram needs bins >= 1 and hi > lo, got {bins} bins on [{lo}, {hi}]")));
    }
    let width = (hi - lo) / from_usize::<T>(bins);
    let mut counts = vec![0usize; bins];
    for &x in samples {
        if x >= lo && x <= hi {
            let k = ((x - lo) / width).to_usize().unwrap_or(0).min(bins - 1);
            counts[k] += 1;
        }
    }
    let norm = from_usize::<T>(samples.len().max(1)) * width;
    Ok(counts.into_iter().map(|c| from_usize::<T>(c) / norm).collect())
}
