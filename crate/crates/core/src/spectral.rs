//! Unitary DFT/IDFT, radix-2 FFT, DTFT grid evaluation, and frequency-axis
//! bookkeeping.
//!
//! The square transform pair uses the symmetric `1/sqrt(n)` normalization, so
//! forward and inverse are unitary and energy is preserved. The bin count
//! always equals the sample count.

use crate::error::{Error, Result};
use crate::signal::DiscreteSignal;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Scaling convention attached to a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `1/sqrt(n)` on both the forward and inverse transform.
    Unitary,
    /// Plain summation with no scale factor (DTFT-style evaluations).
    Raw,
}

/// Complex bin values together with the frequency grid they live on.
///
/// The grid is in digital radians per sample, or in Hz when the transformed
/// signal carried a sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFrame {
    bins: Vec<Complex64>,
    grid: Vec<f64>,
    normalization: Normalization,
}

impl SpectrumFrame {
    pub fn new(bins: Vec<Complex64>, grid: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if bins.len() != grid.len() {
            return Err(Error::Argument(format!(
                "bins and grid must have equal length ({} vs {})",
                bins.len(),
                grid.len()
            )));
        }
        Ok(Self {
            bins,
            grid,
            normalization,
        })
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Sum of squared bin magnitudes.
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|c| c.norm_sqr()).sum()
    }
}

fn dft_grid(n: usize, sample_rate: Option<f64>) -> Vec<f64> {
    match sample_rate {
        Some(fs) => frequency_grid(n, fs).expect("validated by caller"),
        None => (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect(),
    }
}

/// Unitary discrete Fourier transform of a real signal.
pub fn dft(u: &DiscreteSignal) -> Result<SpectrumFrame> {
    if u.is_empty() {
        return Err(Error::Argument("dft input must be non-empty".into()));
    }
    let n = u.len();
    let scale = 1.0 / (n as f64).sqrt();
    // One table of the n-th roots of unity; index (k*m) mod n walks it.
    let twiddle: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
        .collect();
    let x = u.samples();
    let bins = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &v in x {
                acc += v * twiddle[idx];
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            acc * scale
        })
        .collect();
    SpectrumFrame::new(bins, dft_grid(n, u.sample_rate()), Normalization::Unitary)
}

/// Inverse of [`dft`], with the same `1/sqrt(n)` factor.
///
/// The imaginary residue of the reconstruction is discarded; for spectra of
/// real signals it is at rounding level.
pub fn idft(spectrum: &SpectrumFrame) -> Result<DiscreteSignal> {
    if spectrum.is_empty() {
        return Err(Error::Argument("idft input must be non-empty".into()));
    }
    let n = spectrum.len();
    let scale = 1.0 / (n as f64).sqrt();
    let twiddle: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = 0usize;
        for &bin in spectrum.bins() {
            acc += bin * twiddle[idx];
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
        samples.push(acc.re * scale);
    }
    DiscreteSignal::new(samples)
}

/// Radix-2 fast Fourier transform; same normalization and grid as [`dft`].
///
/// The length must be a power of two; callers pad explicitly.
pub fn fft_pow2(u: &DiscreteSignal) -> Result<SpectrumFrame> {
    let n = u.len();
    if n == 0 {
        return Err(Error::Argument("fft input must be non-empty".into()));
    }
    if !n.is_power_of_two() {
        return Err(Error::Argument(format!(
            "fft length must be a power of 2, got {n} (pad the signal first)"
        )));
    }
    let mut data: Vec<Complex64> = u.samples().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut data);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut data {
        *v *= scale;
    }
    SpectrumFrame::new(data, dft_grid(n, u.sample_rate()), Normalization::Unitary)
}

/// Unitary radix-2 transform of complex data; the kernel behind [`fft_pow2`],
/// exposed for spectral-product pipelines (fast convolution).
pub fn fft_pow2_complex(data: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Argument(format!(
            "fft length must be a nonzero power of 2, got {n}"
        )));
    }
    let mut out = data.to_vec();
    fft_in_place(&mut out);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// Unitary inverse of [`fft_pow2_complex`].
pub fn ifft_pow2(data: &[Complex64]) -> Result<Vec<Complex64>> {
    let conjugated: Vec<Complex64> = data.iter().map(|c| c.conj()).collect();
    let mut out = fft_pow2_complex(&conjugated)?;
    for v in &mut out {
        *v = v.conj();
    }
    Ok(out)
}

/// Iterative radix-2 butterflies over bit-reversed input, no normalization.
fn fft_in_place(data: &mut [Complex64]) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    // Bit-reversal permutation.
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut span = 1;
    while span < n {
        let step = -PI / span as f64;
        let w_span = Complex64::from_polar(1.0, step);
        for start in (0..n).step_by(2 * span) {
            let mut w = Complex64::new(1.0, 0.0);
            for off in 0..span {
                let a = data[start + off];
                let b = data[start + off + span] * w;
                data[start + off] = a + b;
                data[start + off + span] = a - b;
                w *= w_span;
            }
        }
        span *= 2;
    }
}

/// Discrete-time Fourier transform of a finite-duration signal, evaluated at
/// the requested digital frequencies (radians per sample).
///
/// The signal's start index enters the phase, so shifted signals pick up the
/// corresponding linear phase factor. 2-pi periodic in each `theta`.
pub fn dtft(u: &DiscreteSignal, thetas: &[f64]) -> SpectrumFrame {
    let bins = thetas
        .iter()
        .map(|&theta| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &v) in u.samples().iter().enumerate() {
                let k = u.start_index() + i as i64;
                acc += v * Complex64::from_polar(1.0, -theta * k as f64);
            }
            acc
        })
        .collect();
    SpectrumFrame::new(bins, thetas.to_vec(), Normalization::Raw)
        .expect("bins built from the grid")
}

/// Physical frequency-bin centers `f_n = n * fs / n_t` for `n` in `[0, n_t)`.
pub fn frequency_grid(n_t: usize, fs: f64) -> Result<Vec<f64>> {
    if n_t == 0 {
        return Err(Error::Argument("n_t must be at least 1".into()));
    }
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Argument(format!("fs must be positive, got {fs}")));
    }
    Ok((0..n_t).map(|n| n as f64 * fs / n_t as f64).collect())
}
