//! Discrete signal construction, inner-product algebra, and
//! convolution/correlation engines.
//!
//! Signals are real-valued finite sequences, treated as zero outside their
//! support (zero-padding convention). All operations are pure functions over
//! immutable values and are safe to call concurrently.

use crate::error::{Error, Result};

/// A real-valued sample sequence with an optional sample rate and a start
/// index locating the first sample on the integer time axis.
///
/// The start index defaults to 0; correlation routines use it to carry
/// lag-indexed sequences (first entry at lag `-max_lag`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSignal {
    samples: Vec<f64>,
    sample_rate: Option<f64>,
    start_index: i64,
}

impl DiscreteSignal {
    /// Build a signal from raw samples. Every sample must be finite.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if let Some(bad) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "sample {bad} is not finite ({})",
                samples[bad]
            )));
        }
        Ok(Self {
            samples,
            sample_rate: None,
            start_index: 0,
        })
    }

    /// Build a signal and attach a sample rate in Hz (must be positive).
    pub fn with_sample_rate(samples: Vec<f64>, fs: f64) -> Result<Self> {
        let mut s = Self::new(samples)?;
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(Error::Argument(format!(
                "sample rate must be a positive finite value, got {fs}"
            )));
        }
        s.sample_rate = Some(fs);
        Ok(s)
    }

    /// Relocate the first sample to index `k0` on the integer time axis.
    pub fn with_start_index(mut self, k0: i64) -> Self {
        self.start_index = k0;
        self
    }

    /// Attach or replace the sample rate (Hz, must be positive).
    pub fn set_sample_rate(mut self, fs: f64) -> Result<Self> {
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(Error::Argument(format!(
                "sample rate must be a positive finite value, got {fs}"
            )));
        }
        self.sample_rate = Some(fs);
        Ok(self)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample at absolute index `k`, zero outside the stored support.
    pub fn at(&self, k: i64) -> f64 {
        let rel = k - self.start_index;
        if rel < 0 || rel as usize >= self.samples.len() {
            0.0
        } else {
            self.samples[rel as usize]
        }
    }
}

/// Elementary signal shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    /// Unit impulse at `k0`.
    Delta,
    /// Unit step: 1 for `k >= k0`.
    Step,
    /// Unit box on `[k0, k1 - 1]`.
    Box,
}

/// Generate a delta, step, or box sequence of the given length.
///
/// `k1` is required for (and only used by) the box shape.
pub fn elementary(
    kind: Elementary,
    length: usize,
    k0: usize,
    k1: Option<usize>,
) -> Result<DiscreteSignal> {
    if length == 0 {
        return Err(Error::Argument("length must be positive".into()));
    }
    if k0 >= length {
        return Err(Error::Argument(format!(
            "k0 = {k0} is out of range for length {length}"
        )));
    }
    let mut samples = vec![0.0; length];
    match kind {
        Elementary::Delta => samples[k0] = 1.0,
        Elementary::Step => samples[k0..].fill(1.0),
        Elementary::Box => {
            let k1 = k1.ok_or_else(|| Error::Argument("box requires k1".into()))?;
            if k1 <= k0 || k1 > length {
                return Err(Error::Argument(format!(
                    "box bounds must satisfy k0 < k1 <= length, got [{k0}, {k1})"
                )));
            }
            samples[k0..k1].fill(1.0);
        }
    }
    DiscreteSignal::new(samples)
}

/// Inner product of two equal-length real signals.
pub fn inner_product(a: &DiscreteSignal, b: &DiscreteSignal) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x * y)
        .sum())
}

/// Signal energy, the squared l2 norm.
pub fn energy(a: &DiscreteSignal) -> f64 {
    a.samples.iter().map(|x| x * x).sum()
}

/// Root of the signal energy.
pub fn norm(a: &DiscreteSignal) -> f64 {
    energy(a).sqrt()
}

/// Cosine of the angle between two signals, in `[-1, 1]`.
pub fn normalized_correlation(a: &DiscreteSignal, b: &DiscreteSignal) -> Result<f64> {
    let ip = inner_product(a, b)?;
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Domain(
            "normalized correlation requires both signals to have nonzero norm".into(),
        ));
    }
    Ok(ip / (na * nb))
}

/// Output-length convention for [`convolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolveMode {
    /// Complete linear convolution, length `len(a) + len(b) - 1`.
    Full,
    /// The first `len(a)` samples of the full convolution: the causal system
    /// response over the input's support, with zero initial rest.
    CausalTruncated,
}

/// Discrete linear convolution `y[k] = sum_l a[l] b[k-l]`.
///
/// The result's start index is the sum of the operands' start indices, so
/// convolving with a shifted impulse shifts the signal.
pub fn convolve(a: &DiscreteSignal, b: &DiscreteSignal, mode: ConvolveMode) -> Result<DiscreteSignal> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("convolution inputs must be non-empty".into()));
    }
    let full_len = a.len() + b.len() - 1;
    let out_len = match mode {
        ConvolveMode::Full => full_len,
        ConvolveMode::CausalTruncated => a.len(),
    };
    let mut out = vec![0.0; out_len];
    for (l, &av) in a.samples.iter().enumerate() {
        if av == 0.0 {
            continue;
        }
        let hi = b.len().min(out_len.saturating_sub(l));
        for (m, &bv) in b.samples[..hi].iter().enumerate() {
            out[l + m] += av * bv;
        }
    }
    let fs = a.sample_rate.or(b.sample_rate);
    let mut y = DiscreteSignal::new(out)?.with_start_index(a.start_index + b.start_index);
    y.sample_rate = fs;
    Ok(y)
}

/// Biased cross-correlation estimate `r_ab[m] = (1/n) sum_k a[k] b[k+m]`
/// for lags `m` in `[-max_lag, max_lag]`.
///
/// The result carries its lag axis through the start index (`-max_lag`).
pub fn cross_correlate(
    a: &DiscreteSignal,
    b: &DiscreteSignal,
    max_lag: usize,
) -> Result<DiscreteSignal> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if max_lag >= n {
        return Err(Error::Argument(format!(
            "max_lag = {max_lag} must be smaller than the signal length {n}"
        )));
    }
    let mut values = Vec::with_capacity(2 * max_lag + 1);
    for m in -(max_lag as i64)..=(max_lag as i64) {
        let mut acc = 0.0;
        for k in 0..n as i64 {
            let j = k + m;
            if j >= 0 && (j as usize) < n {
                acc += a.samples[k as usize] * b.samples[j as usize];
            }
        }
        values.push(acc / n as f64);
    }
    Ok(DiscreteSignal::new(values)?.with_start_index(-(max_lag as i64)))
}

/// Biased autocorrelation estimate of `v`; symmetric in the lag.
pub fn autocorrelate(v: &DiscreteSignal, max_lag: usize) -> Result<DiscreteSignal> {
    cross_correlate(v, v, max_lag)
}

/// Sample a continuous-time map at `fs` Hz: `samples[k] = f(t0 + k/fs)`.
pub fn sample_continuous(
    f: impl Fn(f64) -> f64,
    fs: f64,
    n_t: usize,
    t0: f64,
) -> Result<DiscreteSignal> {
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Argument(format!("fs must be positive, got {fs}")));
    }
    if n_t == 0 {
        return Err(Error::Argument("n_t must be at least 1".into()));
    }
    let mut samples = Vec::with_capacity(n_t);
    for k in 0..n_t {
        let t = t0 + k as f64 / fs;
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::Data(format!(
                "evaluator produced a non-finite value at t = {t}"
            )));
        }
        samples.push(v);
    }
    DiscreteSignal::with_sample_rate(samples, fs)
}
