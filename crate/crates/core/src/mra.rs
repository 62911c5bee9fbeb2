//! Multi-resolution decomposition of a signal into frequency-band scales via
//! a zero-phase FIR filter bank.
//!
//! Each band-pass response is the difference of two low-pass designs of the
//! same order, so the phase delays cancel; the last band closes the partition
//! against a delayed unit impulse, making the bank sum to an exact delta. In
//! the limit of unit-width bands the bank degenerates into a per-bin spectral
//! decomposition.

use crate::error::{Error, Result};
use crate::filters::{fir_zero_phase, firwin, WindowKind};
use crate::signal::DiscreteSignal;

/// Band edges and filter parameters for an `M`-scale decomposition: scale 1
/// covers `[0, f1]`, interior scales `[f_{m-1}, f_m]`, and the last scale
/// runs to the Nyquist frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySplitting {
    cutoffs: Vec<f64>,
    sample_rate: f64,
    filter_order: usize,
    window_kind: WindowKind,
}

impl FrequencySplitting {
    pub fn new(
        cutoffs: Vec<f64>,
        sample_rate: f64,
        filter_order: usize,
        window_kind: WindowKind,
    ) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::Argument(
                "at least one splitting frequency is required".into(),
            ));
        }
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return Err(Error::Argument(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        for pair in cutoffs.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Argument(format!(
                    "splitting frequencies must be strictly increasing, got {} after {}",
                    pair[1], pair[0]
                )));
            }
        }
        if cutoffs[0] <= 0.0 || *cutoffs.last().unwrap() >= sample_rate / 2.0 {
            return Err(Error::Argument(format!(
                "splitting frequencies must lie strictly inside (0, {})",
                sample_rate / 2.0
            )));
        }
        if filter_order < 3 || filter_order % 2 == 0 {
            return Err(Error::Argument(format!(
                "filter order must be odd and at least 3, got {filter_order}"
            )));
        }
        Ok(Self {
            cutoffs,
            sample_rate,
            filter_order,
            window_kind,
        })
    }

    pub fn cutoffs(&self) -> &[f64] {
        &self.cutoffs
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn filter_order(&self) -> usize {
        self.filter_order
    }

    pub fn window_kind(&self) -> WindowKind {
        self.window_kind
    }

    /// Number of scales produced: one more than the number of cut-offs.
    pub fn num_scales(&self) -> usize {
        self.cutoffs.len() + 1
    }

    /// Shared group delay of every band response, in samples.
    pub fn group_delay(&self) -> usize {
        (self.filter_order - 1) / 2
    }
}

/// Impulse responses of the `M` band filters, all of the same length and
/// group delay.
///
/// Scale 1 is the low-pass at `f1`; interior scales are differences of
/// adjacent low-pass designs; the last scale is the delayed impulse minus the
/// accumulated bank, so the responses sum to the delayed impulse exactly.
pub fn band_impulse_responses(split: &FrequencySplitting) -> Result<Vec<Vec<f64>>> {
    let n = split.filter_order;
    let lows: Vec<Vec<f64>> = split
        .cutoffs
        .iter()
        .map(|&fc| {
            firwin(n, fc, split.sample_rate, split.window_kind).map(|d| d.taps().to_vec())
        })
        .collect::<Result<_>>()?;

    let mut bands: Vec<Vec<f64>> = Vec::with_capacity(split.num_scales());
    bands.push(lows[0].clone());
    for m in 1..lows.len() {
        bands.push(
            lows[m]
                .iter()
                .zip(&lows[m - 1])
                .map(|(hi, lo)| hi - lo)
                .collect(),
        );
    }
    let mut acc = vec![0.0; n];
    for band in &bands {
        for (slot, v) in acc.iter_mut().zip(band) {
            *slot += v;
        }
    }
    let alpha = split.group_delay();
    bands.push(
        acc.iter()
            .enumerate()
            .map(|(k, &s)| if k == alpha { 1.0 - s } else { -s })
            .collect(),
    );
    Ok(bands)
}

/// Split `u` into its `M` per-band scales by zero-phase filtering.
///
/// The band passes are independent of each other; results do not depend on
/// the order they are computed in.
pub fn decompose(u: &DiscreteSignal, split: &FrequencySplitting) -> Result<Vec<DiscreteSignal>> {
    if u.len() <= split.filter_order {
        return Err(Error::Argument(format!(
            "signal length {} must exceed the filter order {}",
            u.len(),
            split.filter_order
        )));
    }
    band_impulse_responses(split)?
        .iter()
        .map(|band| fir_zero_phase(band, u))
        .collect()
}

/// Elementwise sum of the scales; inverts [`decompose`] away from the edges.
pub fn reconstruct(scales: &[DiscreteSignal]) -> Result<DiscreteSignal> {
    let first = scales
        .first()
        .ok_or_else(|| Error::Argument("at least one scale is required".into()))?;
    let n = first.len();
    if scales.iter().any(|s| s.len() != n) {
        return Err(Error::Argument("scales must share one length".into()));
    }
    let mut acc = vec![0.0; n];
    for scale in scales {
        for (slot, v) in acc.iter_mut().zip(scale.samples()) {
            *slot += v;
        }
    }
    match first.sample_rate() {
        Some(fs) => DiscreteSignal::with_sample_rate(acc, fs),
        None => DiscreteSignal::new(acc),
    }
}
