use rand::Rng;
use serde::Serialize;

use super::{effective, ContinuousLaw, NoncentralChi2C, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Probability mass allowed outside the cached Chernoff interval.
const BOUND_TAIL: f64 = 1e-14;
const GOLDEN_STEPS: usize = 90;
const BISECT_STEPS: usize = 60;
const MAX_REFINEMENTS: usize = 10;
const LONG_SERIES: usize = 100_000;

/// Law of `pos − neg` for two independent power estimates.
///
/// Evaluated by midpoint-rule inversion of the characteristic function. The
/// integration spacing comes from a Chernoff interval that holds all but
/// `BOUND_TAIL` of the mass, and is halved until two successive spacings agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaDifference<T> {
    pos: NoncentralChi2C<T>,
    neg: NoncentralChi2C<T>,
    #[serde(skip)]
    bounds: (T, T),
}

impl<T: Real> GammaDifference<T> {
    pub fn new(pos: impl Into<NoncentralChi2C<T>>, neg: impl Into<NoncentralChi2C<T>>) -> Result<Self> {
        let mut law = Self {
            pos: pos.into(),
            neg: neg.into(),
            bounds: (T::neg_infinity(), T::infinity()),
        };
        let tail = effective::<T>(BOUND_TAIL).ln();
        law.bounds = (law.chernoff_edge(tail, false), law.chernoff_edge(tail, true));
        if !(law.bounds.0.is_finite() && law.bounds.1.is_finite()) {
            return Err(Error::computation(law.describe(), "could not bound the support", f64::NAN));
        }
        Ok(law)
    }

    pub fn pos(&self) -> &NoncentralChi2C<T> {
        &self.pos
    }

    pub fn neg(&self) -> &NoncentralChi2C<T> {
        &self.neg
    }

    /// Interval outside which each tail holds at most `1e-14` of the mass.
    pub fn tail_bounds(&self) -> (T, T) {
        self.bounds
    }

    fn cgf(&self, s: T) -> T {
        self.pos.cgf(s) + self.neg.cgf(-s)
    }

    /// `min_s K(s) − s a` over the half-line of `s` matching the tail side;
    /// any `s` gives a valid bound, so an inexact minimizer stays conservative.
    fn chernoff_exponent(&self, a: T, upper: bool) -> T {
        let edge = if upper { self.pos.cgf_pole() } else { -self.neg.cgf_pole() } * (T::one() - lit(1e-9));
        let f = |s: T| self.cgf(s) - s * a;
        let ratio = lit::<T>(0.5 * (5.0_f64.sqrt() - 1.0));
        let (mut x0, mut x1) = (T::zero(), edge);
        let mut c = x1 - ratio * (x1 - x0);
        let mut d = x0 + ratio * (x1 - x0);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..GOLDEN_STEPS {
            if fc < fd {
                x1 = d;
                d = c;
                fd = fc;
                c = x1 - ratio * (x1 - x0);
                fc = f(c);
            } else {
                x0 = c;
                c = d;
                fc = fd;
                d = x0 + ratio * (x1 - x0);
                fd = f(d);
            }
        }
        fc.min(fd).min(T::zero())
    }

    /// Smallest (upper) or largest (lower) point found whose Chernoff tail
    /// exponent is at most `ln_tail`.
    fn chernoff_edge(&self, ln_tail: T, upper: bool) -> T {
        let mean = self.mean();
        let sd = self.variance().sqrt();
        let dir = if upper { T::one() } else { -T::one() };
        let mut inner = T::zero();
        let mut outer = T::one();
        while self.chernoff_exponent(mean + dir * outer * sd, upper) > ln_tail {
            inner = outer;
            outer = outer + outer;
            if outer > lit(1e12) {
                return T::nan();
            }
        }
        for _ in 0..BISECT_STEPS {
            let mid = (inner + outer) * lit(0.5);
            if self.chernoff_exponent(mean + dir * mid * sd, upper) > ln_tail {
                inner = mid;
            } else {
                outer = mid;
            }
        }
        mean + dir * outer * sd
    }

    /// Midpoint-rule inversion with spacing `2π/len`.
    ///
    /// `ln|φ|` is concave in `ln ω`, so beyond `ω` the modulus stays below
    /// `|φ(ω)| (ω/x)^s` with `s` the local decay slope. That bounds the
    /// truncated remainder of both sums.
    fn invert_once(&self, t: T, len: T, tol: T, max_terms: usize, want_pdf: bool) -> Result<(T, T)> {
        let pi = T::PI();
        let delta = lit::<T>(2.0) * pi / len;
        let half = lit::<T>(0.5);
        let (mut cdf_sum, mut pdf_sum) = (T::zero(), T::zero());
        // Well below tol so neighbouring evaluations stay ordered in the far
        // tails; slowly decaying (small-N) transforms settle for tol/10.
        let strict = tol * lit(1e-3);
        let loose = tol * lit(0.1);
        let mut remainder = T::infinity();
        for m in 0..max_terms {
            let k = lit::<T>(m as f64) + half;
            let omega = k * delta;
            let (re_p, im_p) = self.pos.ln_cf(omega);
            let (re_n, im_n) = self.neg.ln_cf(omega);
            let modulus = (re_p + re_n).exp();
            let (sin, cos) = (im_p - im_n - omega * t).sin_cos();
            cdf_sum = cdf_sum + modulus * sin / k;
            pdf_sum = pdf_sum + modulus * cos;

            let slope = self.pos.cf_decay_slope(omega) + self.neg.cf_decay_slope(omega);
            let cdf_rem = modulus / (pi * slope);
            let pdf_rem = if slope > T::one() { delta * modulus * k / (pi * (slope - T::one())) } else { T::infinity() };
            remainder = if want_pdf { cdf_rem.max(pdf_rem) } else { cdf_rem };
            if remainder < strict || (m >= LONG_SERIES && remainder < loose) {
                let cdf = half - cdf_sum / pi;
                let pdf = delta * pdf_sum / pi;
                return Ok((pdf, cdf));
            }
        }
        Err(Error::computation(
            self.describe(),
            format!("inversion series exceeded {max_terms} terms"),
            remainder.to_f64().unwrap_or(f64::NAN),
        ))
    }

    /// Density and distribution function at `t`.
    pub fn pdf_cdf(&self, t: T, tol: &Tolerances) -> Result<(T, T)> {
        self.evaluate(t, tol, true)
    }

    fn evaluate(&self, t: T, tol: &Tolerances, want_pdf: bool) -> Result<(T, T)> {
        let (lo, hi) = self.bounds;
        if t <= lo {
            return Ok((T::zero(), T::zero()));
        }
        if t >= hi {
            return Ok((T::zero(), T::one()));
        }
        let target: T = effective(tol.gamma_difference);
        let mut len = (t - lo).max(hi - t) * lit(1.1);
        let mut prev = self.invert_once(t, len, target, tol.max_terms, want_pdf)?;
        let mut gap = T::infinity();
        for _ in 0..MAX_REFINEMENTS {
            len = len + len;
            let next = self.invert_once(t, len, target, tol.max_terms, want_pdf)?;
            gap = (next.1 - prev.1).abs();
            prev = next;
            if gap <= target {
                return Ok((prev.0.max(T::zero()), prev.1.clamp(T::zero(), T::one())));
            }
        }
        Err(Error::computation(
            self.describe(),
            format!("inversion at t={t} did not stabilise"),
            gap.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

impl<T: Real> ContinuousLaw<T> for GammaDifference<T> {
    fn cdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        self.evaluate(t, tol, false).map(|(_, f)| f)
    }

    fn pdf_with(&self, t: T, tol: &Tolerances) -> Result<T> {
        self.pdf_cdf(t, tol).map(|(p, _)| p)
    }

    fn mean(&self) -> T {
        self.pos.mean() - self.neg.mean()
    }

    fn variance(&self) -> T {
        self.pos.variance() + self.neg.variance()
    }

    fn support(&self) -> (T, T) {
        (T::neg_infinity(), T::infinity())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        self.pos.sample(rng) - self.neg.sample(rng)
    }

    fn describe(&self) -> String {
        format!("GammaDifference({} - {})", self.pos.describe(), self.neg.describe())
    }
}
