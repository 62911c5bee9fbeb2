//! Seeded noise generation and LTI statistical propagation: mean,
//! autocorrelation, and power spectral density.
//!
//! The generator is a self-contained splitmix64 stream so a seed fully
//! determines the sequence; Gaussian variates come from the Box-Muller
//! transform over that uniform source. Generator state is an explicit value
//! owned by the caller, and cloning it forks the stream.

use crate::error::{Error, Result};
use crate::signal::{convolve, ConvolveMode, DiscreteSignal};
use crate::spectral::{frequency_grid, Normalization, SpectrumFrame};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Sample distribution of a noise stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseDistribution {
    /// Uniform on `[0, 1)`.
    Uniform01,
    /// Normal with the given mean and standard deviation.
    Gaussian { mean: f64, std_dev: f64 },
}

/// Seed plus distribution; the full description of a reproducible stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    seed: u64,
    distribution: NoiseDistribution,
}

impl NoiseSpec {
    pub fn new(seed: u64, distribution: NoiseDistribution) -> Result<Self> {
        if let NoiseDistribution::Gaussian { mean, std_dev } = distribution {
            if !(std_dev > 0.0) || !std_dev.is_finite() || !mean.is_finite() {
                return Err(Error::Argument(format!(
                    "gaussian noise requires finite mean and positive std dev, got ({mean}, {std_dev})"
                )));
            }
        }
        Ok(Self { seed, distribution })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn distribution(&self) -> NoiseDistribution {
        self.distribution
    }
}

/// Deterministic splitmix64 stream with Box-Muller Gaussian sampling.
#[derive(Debug, Clone)]
pub struct NoiseGenerator {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl NoiseGenerator {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            state: seed,
            spare_gaussian: None,
        }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform sample on `[0, 1)`.
    pub fn next_uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal sample via Box-Muller over the uniform source.
    pub fn next_standard_gaussian(&mut self) -> f64 {
        if let Some(v) = self.spare_gaussian.take() {
            return v;
        }
        // Shift the first variate into (0, 1] so the logarithm stays finite.
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_uniform01();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * PI * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Generate `n` samples of the specified noise; identical for equal seeds.
pub fn white_noise(spec: &NoiseSpec, n: usize) -> Result<DiscreteSignal> {
    if n == 0 {
        return Err(Error::Argument("sample count must be at least 1".into()));
    }
    let mut gen = NoiseGenerator::from_seed(spec.seed);
    let samples: Vec<f64> = match spec.distribution {
        NoiseDistribution::Uniform01 => (0..n).map(|_| gen.next_uniform01()).collect(),
        NoiseDistribution::Gaussian { mean, std_dev } => (0..n)
            .map(|_| mean + std_dev * gen.next_standard_gaussian())
            .collect(),
    };
    DiscreteSignal::new(samples)
}

/// One modulated tone: `amplitude * sin(2 pi f t) * exp(-(t - center)^2 / width)`.
///
/// An infinite width makes the envelope identically one (a pure tone).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneComponent {
    pub amplitude: f64,
    pub frequency_hz: f64,
    pub center_s: f64,
    pub width: f64,
}

/// Sum of Gaussian-windowed tones over a time grid, plus optional noise.
pub fn synthetic_signal(
    t_grid: &[f64],
    components: &[ToneComponent],
    noise: Option<&NoiseSpec>,
) -> Result<DiscreteSignal> {
    if t_grid.is_empty() {
        return Err(Error::Argument("time grid must be non-empty".into()));
    }
    for c in components {
        if !(c.width > 0.0) {
            return Err(Error::Argument(format!(
                "component width must be positive (possibly infinite), got {}",
                c.width
            )));
        }
    }
    let mut samples: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            components
                .iter()
                .map(|c| {
                    let envelope = (-(t - c.center_s).powi(2) / c.width).exp();
                    c.amplitude * (2.0 * PI * c.frequency_hz * t).sin() * envelope
                })
                .sum()
        })
        .collect();
    if let Some(spec) = noise {
        let noise = white_noise(spec, t_grid.len())?;
        for (s, v) in samples.iter_mut().zip(noise.samples()) {
            *s += v;
        }
    }
    DiscreteSignal::new(samples)
}

/// Mean of the output of a filter fed with mean-`mu_in` stationary noise:
/// `mu_in * sum_k h[k]`.
pub fn propagate_mean(h: &DiscreteSignal, mu_in: f64) -> f64 {
    mu_in * h.samples().iter().sum::<f64>()
}

/// Deterministic autocorrelation of an impulse response,
/// `r_hh[k] = sum_l h[l] h[l+k]`, over all lags with support.
pub fn impulse_response_autocorrelation(h: &DiscreteSignal) -> DiscreteSignal {
    let n = h.len();
    let x = h.samples();
    let max_lag = n.saturating_sub(1) as i64;
    let mut values = Vec::with_capacity(2 * n - 1);
    for m in -max_lag..=max_lag {
        let mut acc = 0.0;
        for l in 0..n as i64 {
            let j = l + m;
            if j >= 0 && (j as usize) < n {
                acc += x[l as usize] * x[j as usize];
            }
        }
        values.push(acc);
    }
    DiscreteSignal::new(values)
        .expect("finite inputs stay finite")
        .with_start_index(-max_lag)
}

fn check_symmetric_lags(r: &DiscreteSignal, name: &str) -> Result<usize> {
    let n = r.len();
    if n % 2 == 0 {
        return Err(Error::Argument(format!(
            "{name} must have an odd number of lags centered on zero"
        )));
    }
    let half = n / 2;
    if r.start_index() != -(half as i64) {
        return Err(Error::Argument(format!(
            "{name} must start at lag -{half}, got {}",
            r.start_index()
        )));
    }
    let x = r.samples();
    for m in 0..half {
        if (x[m] - x[n - 1 - m]).abs() > 1e-9 {
            return Err(Error::Argument(format!(
                "{name} is asymmetric at lag {} by {:e}",
                half - m,
                x[m] - x[n - 1 - m]
            )));
        }
    }
    Ok(half)
}

/// Output autocorrelation of an LTI system fed with stationary noise of
/// autocorrelation `r_uu`: the convolution of `r_uu` with the impulse
/// response autocorrelation.
pub fn autocorr_propagation(h: &DiscreteSignal, r_uu: &DiscreteSignal) -> Result<DiscreteSignal> {
    check_symmetric_lags(r_uu, "input autocorrelation")?;
    let r_hh = impulse_response_autocorrelation(h);
    convolve(r_uu, &r_hh, ConvolveMode::Full)
}

/// Power spectral density of a symmetric lag sequence: the plain (unscaled)
/// transform of the sequence arranged circularly with lag zero first.
///
/// That arrangement makes the transform real for symmetric input; the
/// imaginary residual is checked against 1e-9 and dropped.
pub fn psd(r: &DiscreteSignal, fs: f64) -> Result<SpectrumFrame> {
    let half = check_symmetric_lags(r, "lag sequence")?;
    let n = r.len();
    let x = r.samples();
    // Rotate [r(-L)..r(L)] into [r(0)..r(L), r(-L)..r(-1)].
    let rotated: Vec<f64> = x[half..].iter().chain(x[..half].iter()).copied().collect();
    let scale: f64 = x.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    let mut bins = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &v) in rotated.iter().enumerate() {
            let ang = -2.0 * PI * (k * m % n) as f64 / n as f64;
            acc += v * Complex64::new(ang.cos(), ang.sin());
        }
        if acc.im.abs() > 1e-9 * scale {
            return Err(Error::Numerical(format!(
                "spectral density has imaginary residual {:e} at bin {k}",
                acc.im
            )));
        }
        bins.push(Complex64::new(acc.re, 0.0));
    }
    SpectrumFrame::new(bins, frequency_grid(n, fs)?, Normalization::Raw)
}
