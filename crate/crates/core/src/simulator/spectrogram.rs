use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    fn coefficients<T: Real>(self, len: usize) -> Vec<T> {
        match self {
            Window::Rectangular => vec![T::one(); len],
            Window::Hann => (0..len)
                .map(|k| {
                    let x = T::TAU() * from_usize::<T>(k) / from_usize::<T>(len);
                    lit::<T>(0.5) * (T::one() - x.cos())
                })
                .collect(),
        }
    }
}

/// `|FFT|²` of successive frames, rectangular window. Rows are frames; bin `k`
/// is frequency `k / fft_len` cycles per sample (natural FFT order).
pub fn spectrogram<T: Real>(stream: &[Complex<T>], fft_len: usize, hop: usize) -> Result<Vec<Vec<T>>> {
    spectrogram_with(stream, fft_len, hop, Window::Rectangular)
}

pub fn spectrogram_with<T: Real>(stream: &[Complex<T>], fft_len: usize, hop: usize, window: Window) -> Result<Vec<Vec<T>>> {
    if fft_len == 0 || hop == 0 {
        return Err(Error::validation(format!("fft_len and hop must be >= 1, got {fft_len} and {hop}")));
    }
    if fft_len > stream.len() {
        return Err(Error::validation(format!("fft_len {fft_len} exceeds stream length {}", stream.len())));
    }
    let coeffs = window.coefficients::<T>(fft_len);
    let fft = FftPlanner::<T>::new().plan_fft_forward(fft_len);
    let frames = (stream.len() - fft_len) / hop + 1;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); fft_len];
    let mut out = Vec::with_capacity(frames);
    for f in 0..frames {
        let frame = &stream[f * hop..f * hop + fft_len];
        for ((b, x), w) in buf.iter_mut().zip(frame).zip(&coeffs) {
            *b = x.scale(*w);
        }
        fft.process(&mut buf);
        out.push(buf.iter().map(|z| z.norm_sqr()).collect());
    }
    Ok(out)
}

/// Index of the largest bin in each frame.
pub fn peak_bins<T: Real>(spec: &[Vec<T>]) -> Vec<usize> {
    spec.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |best, (k, &v)| if v > best.1 { (k, v) } else { best })
                .0
        })
        .collect()
}
