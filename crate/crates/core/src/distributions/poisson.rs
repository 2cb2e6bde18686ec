use crate::error::{Error, Result};
use crate::scalar::{from_usize, Real};
use crate::special::ln_gamma_kernel;

/// Contiguous run of Poisson weights holding all but `neglected` of the mass.
#[derive(Debug, Clone)]
pub(crate) struct PoissonWindow<T> {
    pub start: usize,
    pub weights: Vec<T>,
    pub neglected: T,
}

impl<T: Real> PoissonWindow<T> {
    /// Grows outward from the mode, always taking the heavier neighbour,
    /// until the accumulated mass reaches `1 - tail`.
    pub fn new(mean: T, tail: T, max_terms: usize) -> Result<Self> {
        if !(mean >= T::zero()) || !mean.is_finite() {
            return Err(Error::domain(format!("Poisson mean must be finite and >= 0, got {mean}")));
        }
        if mean == T::zero() {
            return Ok(Self {
                start: 0,
                weights: vec![T::one()],
                neglected: T::zero(),
            });
        }
        let mode = mean.floor().to_usize().unwrap_or(0);
        let w_mode = (ln_gamma_kernel(from_usize::<T>(mode + 1), mean) - mean.ln()).exp();

        let mut left: Vec<T> = Vec::new();
        let mut right: Vec<T> = Vec::new();
        let (mut lo, mut hi) = (mode, mode);
        let (mut w_lo, mut w_hi) = (w_mode, w_mode);
        let mut total = w_mode;
        while T::one() - total > tail {
            if left.len() + right.len() + 1 >= max_terms {
                return Err(Error::computation(
                    format!("Poisson({mean}) weights"),
                    "term budget exhausted",
                    (T::one() - total).to_f64().unwrap_or(f64::NAN),
                ));
            }
            let next_lo = if lo > 0 { w_lo * from_usize::<T>(lo) / mean } else { T::zero() };
            let next_hi = w_hi * mean / from_usize::<T>(hi + 1);
            if next_lo == T::zero() && next_hi == T::zero() {
                break;
            }
            if next_lo >= next_hi {
                lo -= 1;
                w_lo = next_lo;
                left.push(next_lo);
                total = total + next_lo;
            } else {
                hi += 1;
                w_hi = next_hi;
                right.push(next_hi);
                total = total + next_hi;
            }
        }
        left.reverse();
        left.push(w_mode);
        left.extend(right);
        Ok(Self {
            start: lo,
            weights: left,
            neglected: (T::one() - total).max(T::zero()),
        })
    }
}
