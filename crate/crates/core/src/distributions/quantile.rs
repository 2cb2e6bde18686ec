use super::{effective, ContinuousLaw, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const MAX_BRACKET_STEPS: usize = 2_000;
const MAX_ROOT_STEPS: usize = 400;

/// Solves `cdf(t) = p` by bracket expansion followed by Illinois regula falsi
/// with a bisection safeguard.
pub(super) fn invert<T: Real, L: ContinuousLaw<T>>(law: &L, p: T, tol: &Tolerances) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain(format!("quantile requires 0 < p < 1, got {p}")));
    }
    let target: T = effective(tol.quantile);
    let (support_lo, _) = law.support();
    let bounded_below = support_lo.is_finite();

    let mean = law.mean();
    let sd = law.variance().sqrt();
    let (guess, mut step) = if mean.is_finite() && sd.is_finite() && sd > T::zero() {
        (mean, sd)
    } else {
        let g = if bounded_below { support_lo + T::one() } else { T::zero() };
        (g, T::one())
    };
    let f = |t: T| -> Result<T> { Ok(law.cdf_with(t, tol)? - p) };

    let lower_probe = |t: T, step: T| -> T {
        if bounded_below && t - step <= support_lo {
            support_lo + (t - support_lo) * lit(0.5)
        } else {
            t - step
        }
    };

    let mut lo = lower_probe(guess, step);
    let mut f_lo = f(lo)?;
    let mut steps = 0;
    while f_lo > T::zero() {
        lo = lower_probe(lo, step);
        step = step + step;
        f_lo = f(lo)?;
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(bracket_error(law, p));
        }
    }
    let mut hi = guess + step;
    let mut f_hi = f(hi)?;
    while f_hi < T::zero() {
        lo = hi;
        f_lo = f_hi;
        hi = hi + step;
        step = step + step;
        f_hi = f(hi)?;
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(bracket_error(law, p));
        }
    }
    if f_lo.abs() <= target {
        return Ok(lo);
    }
    if f_hi.abs() <= target {
        return Ok(hi);
    }

    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    let mut side = 0i8;
    for _ in 0..MAX_ROOT_STEPS {
        let width = hi - lo;
        let mut x = hi - f_hi * width / (f_hi - f_lo);
        let margin = width * lit(1e-3);
        if !(x > lo + margin && x < hi - margin) {
            x = lo + width * lit(0.5);
        }
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.abs() <= target {
            return Ok(x);
        }
        if (fx < T::zero()) == (f_lo < T::zero()) {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi = f_hi * lit(0.5);
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo = f_lo * lit(0.5);
            }
            side = 1;
        }
        let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
        if hi - lo <= scale * T::epsilon() * lit(4.0) {
            // Bracket at machine resolution: the cdf step across it bounds the error.
            return Ok(best.0);
        }
    }
    Err(Error::computation(
        law.describe(),
        format!("quantile({p}) did not converge"),
        best.1.abs().to_f64().unwrap_or(f64::NAN),
    ))
}

fn bracket_error<T: Real, L: ContinuousLaw<T>>(law: &L, p: T) -> Error {
    Error::computation(law.describe(), format!("could not bracket quantile({p})"), f64::NAN)
}
