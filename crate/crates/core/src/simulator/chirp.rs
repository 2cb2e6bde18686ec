use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{from_usize, lit, Real};

/// Linear-drift complex chirp `a · exp(i(φ₀ + 2π(f₀ n + ½ ḟ n²)))`.
///
/// Frequencies are in cycles per sample, the drift in cycles per sample².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpParams<T> {
    pub amplitude: T,
    pub start_freq: T,
    pub drift_rate: T,
    pub phase0: T,
}

impl<T: Real> ChirpParams<T> {
    pub fn tone(amplitude: T, freq: T) -> Self {
        Self {
            amplitude,
            start_freq: freq,
            drift_rate: T::zero(),
            phase0: T::zero(),
        }
    }

    pub fn with_drift(mut self, drift_rate: T) -> Self {
        self.drift_rate = drift_rate;
        self
    }

    pub fn with_phase(mut self, phase0: T) -> Self {
        self.phase0 = phase0;
        self
    }

    /// Amplitude giving total energy `energy` over `n` samples.
    pub fn amplitude_for_energy(energy: T, n: usize) -> T {
        (energy / from_usize::<T>(n)).sqrt()
    }

    pub fn energy(&self, n: usize) -> T {
        from_usize::<T>(n) * self.amplitude * self.amplitude
    }

    pub fn instantaneous_freq(&self, n: usize) -> T {
        self.start_freq + self.drift_rate * from_usize::<T>(n)
    }

    /// Sample `n` with an extra phase offset.
    #[inline]
    pub fn sample(&self, n: usize, phase_offset: T) -> Complex<T> {
        let nf = from_usize::<T>(n);
        // reduce to a fractional cycle before scaling by 2π to keep precision
        let cycles = self.start_freq * nf + lit::<T>(0.5) * self.drift_rate * nf * nf;
        let frac = cycles - cycles.floor();
        let phase = self.phase0 + phase_offset + T::TAU() * frac;
        Complex::from_polar(self.amplitude, phase)
    }

    pub fn synthesize(&self, n: usize) -> Vec<Complex<T>> {
        (0..n).map(|k| self.sample(k, T::zero())).collect()
    }
}
