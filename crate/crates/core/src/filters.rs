//! FIR window-method design, Butterworth IIR design, complementary filters,
//! and causal / zero-phase application.

use crate::error::{Error, Result};
use crate::lti::{prewarp, RationalTransferFunction, Stability, TfDomain};
use crate::signal::{convolve, ConvolveMode, DiscreteSignal};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Window functions for the FIR design method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    Rectangular,
    Hanning,
    Hamming,
    Blackman,
}

impl WindowKind {
    pub fn name(&self) -> &'static str {
        match self {
            WindowKind::Rectangular => "rectangular",
            WindowKind::Hanning => "hanning",
            WindowKind::Hamming => "hamming",
            WindowKind::Blackman => "blackman",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "rectangular" => Ok(WindowKind::Rectangular),
            "hanning" => Ok(WindowKind::Hanning),
            "hamming" => Ok(WindowKind::Hamming),
            "blackman" => Ok(WindowKind::Blackman),
            other => Err(Error::Argument(format!("unknown window kind {other:?}"))),
        }
    }
}

/// A linear-phase low-pass FIR design: odd-length symmetric taps normalized
/// to unit dc gain, with group delay `(N-1)/2` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FirDesign {
    taps: Vec<f64>,
    cutoff: f64,
    sample_rate: f64,
    window_kind: WindowKind,
}

impl FirDesign {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn window_kind(&self) -> WindowKind {
        self.window_kind
    }

    pub fn order(&self) -> usize {
        self.taps.len()
    }

    /// Constant input-output lag of the causal filter, in samples.
    pub fn group_delay(&self) -> usize {
        (self.taps.len() - 1) / 2
    }

    /// Causal application: convolution truncated to the input's support.
    pub fn apply(&self, u: &DiscreteSignal) -> Result<DiscreteSignal> {
        fir_apply(&self.taps, u)
    }

    /// Zero-phase application: full convolution advanced by the group delay,
    /// which cancels the linear phase exactly.
    ///
    /// The output has the input's length; the `group_delay()` samples at each
    /// edge are influenced by the zero-padding beyond the signal's support.
    pub fn zero_phase(&self, u: &DiscreteSignal) -> Result<DiscreteSignal> {
        fir_zero_phase(&self.taps, u)
    }
}

/// Causal convolution of raw taps with a signal, truncated to its support.
pub fn fir_apply(taps: &[f64], u: &DiscreteSignal) -> Result<DiscreteSignal> {
    if taps.is_empty() {
        return Err(Error::Argument("tap vector must be non-empty".into()));
    }
    let h = DiscreteSignal::new(taps.to_vec())?;
    convolve(u, &h, ConvolveMode::CausalTruncated)
}

/// Zero-phase application of raw symmetric odd-length taps: full convolution
/// advanced by `(N-1)/2` samples.
pub fn fir_zero_phase(taps: &[f64], u: &DiscreteSignal) -> Result<DiscreteSignal> {
    if taps.len() % 2 == 0 {
        return Err(Error::Argument(format!(
            "zero-phase compensation needs an odd tap count, got {}",
            taps.len()
        )));
    }
    let h = DiscreteSignal::new(taps.to_vec())?;
    let full = convolve(u, &h, ConvolveMode::Full)?;
    let alpha = (taps.len() - 1) / 2;
    let out = full.samples()[alpha..alpha + u.len()].to_vec();
    match u.sample_rate() {
        Some(fs) => DiscreteSignal::with_sample_rate(out, fs),
        None => DiscreteSignal::new(out),
    }
}

/// Impulse response of the ideal low-pass filter with digital cut-off
/// `theta_c`, delayed to the window midpoint: `h[k] = sin((k-a) theta_c) /
/// (pi (k-a))` with `a = (N-1)/2`; the midpoint sample is the limit value
/// `theta_c / pi`.
pub fn ideal_lowpass_ir(theta_c: f64, n: usize) -> Result<Vec<f64>> {
    if !(theta_c > 0.0) || theta_c > PI {
        return Err(Error::Argument(format!(
            "digital cut-off must lie in (0, pi], got {theta_c}"
        )));
    }
    validate_fir_length(n)?;
    let alpha = (n - 1) / 2;
    let mut h = vec![0.0; n];
    h[alpha] = theta_c / PI;
    // Mirrored fill keeps the symmetry exact.
    for m in 1..=alpha {
        let v = (m as f64 * theta_c).sin() / (PI * m as f64);
        h[alpha - m] = v;
        h[alpha + m] = v;
    }
    Ok(h)
}

/// Symmetric window of length `n` (n >= 2).
pub fn window(kind: WindowKind, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Argument(format!(
            "window length must be at least 2, got {n}"
        )));
    }
    let denom = (n - 1) as f64;
    let value = |k: usize| -> f64 {
        let x = 2.0 * PI * k as f64 / denom;
        match kind {
            WindowKind::Rectangular => 1.0,
            WindowKind::Hanning => 0.5 - 0.5 * x.cos(),
            WindowKind::Hamming => 0.54 - 0.46 * x.cos(),
            WindowKind::Blackman => 0.42 - 0.5 * x.cos() + 0.08 * (2.0 * x).cos(),
        }
    };
    let mut w = vec![0.0; n];
    for k in 0..=(n - 1) / 2 {
        let v = value(k);
        w[k] = v;
        w[n - 1 - k] = v;
    }
    Ok(w)
}

/// Low-pass FIR design by the window method: the ideal impulse response
/// multiplied by the window, then normalized to unit dc gain.
pub fn firwin(n: usize, fc: f64, fs: f64, kind: WindowKind) -> Result<FirDesign> {
    validate_fir_length(n)?;
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Argument(format!("fs must be positive, got {fs}")));
    }
    if !(fc > 0.0) || fc >= fs / 2.0 {
        return Err(Error::Argument(format!(
            "cut-off must lie in (0, fs/2) = (0, {}), got {fc}",
            fs / 2.0
        )));
    }
    let theta_c = 2.0 * PI * fc / fs;
    let ideal = ideal_lowpass_ir(theta_c, n)?;
    let w = window(kind, n)?;
    let mut taps: Vec<f64> = ideal.iter().zip(&w).map(|(h, w)| h * w).collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    Ok(FirDesign {
        taps,
        cutoff: fc,
        sample_rate: fs,
        window_kind: kind,
    })
}

/// High-pass taps complementary to a low-pass design: a unit impulse at the
/// group delay minus the low-pass taps, so the two sum back to the delayed
/// impulse exactly.
pub fn highpass_complement(fir: &FirDesign) -> Vec<f64> {
    let alpha = fir.group_delay();
    fir.taps
        .iter()
        .enumerate()
        .map(|(k, &t)| if k == alpha { 1.0 - t } else { -t })
        .collect()
}

/// High-pass taps by spectral reversal: `(-1)^n` times the low-pass taps,
/// which mirrors the frequency response about a quarter of the sample rate.
pub fn spectral_reverse(fir: &FirDesign) -> Vec<f64> {
    fir.taps
        .iter()
        .enumerate()
        .map(|(k, &t)| if k % 2 == 0 { t } else { -t })
        .collect()
}

/// Low-pass Butterworth design: `n` analog poles equally spaced on the
/// left-hand circle at the pre-warped cut-off, no finite zeros, unit dc
/// gain, discretized by the bilinear map in pole/zero form so the half-power
/// point lands exactly on `fc`.
pub fn butterworth(n: usize, fc: f64, fs: f64) -> Result<RationalTransferFunction> {
    if n == 0 {
        return Err(Error::Argument("filter order must be at least 1".into()));
    }
    if n > 20 {
        return Err(Error::Numerical(format!(
            "order-{n} coefficient expansion is numerically unreliable; maximum supported \
             order is 20"
        )));
    }
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Argument(format!("fs must be positive, got {fs}")));
    }
    if !(fc > 0.0) || fc >= fs / 2.0 {
        return Err(Error::Argument(format!(
            "cut-off must lie in (0, fs/2) = (0, {}), got {fc}",
            fs / 2.0
        )));
    }
    let wp = 2.0 * PI * prewarp(fc, fs)?;
    let big_k = 2.0 * fs;

    // Analog prototype poles on the circle of radius wp, and their bilinear
    // images (K + p)/(K - p); the n-fold zero at infinity maps to z = -1.
    let pole = |k: usize| -> Complex64 {
        let angle = PI * (2.0 * k as f64 + n as f64 + 1.0) / (2.0 * n as f64);
        Complex64::from_polar(wp, angle)
    };

    let mut a = vec![1.0];
    let mut denom_gain = Complex64::new(1.0, 0.0);
    for k in 0..n / 2 {
        let p = pole(k);
        let pz = (big_k + p) / (big_k - p);
        a = crate::poly::poly_mul(&a, &[1.0, -2.0 * pz.re, pz.norm_sqr()]);
        let q = pole(n - 1 - k);
        denom_gain *= (big_k - p) * (big_k - q);
    }
    if n % 2 == 1 {
        let p = pole(n / 2); // the real pole at angle pi
        let pz = (big_k + p) / (big_k - p);
        a = crate::poly::poly_mul(&a, &[1.0, -pz.re]);
        denom_gain *= big_k - p;
    }
    if denom_gain.im.abs() > 1e-6 * denom_gain.norm() {
        return Err(Error::Numerical(
            "butterworth gain product lost conjugate symmetry".into(),
        ));
    }
    let gain = wp.powi(n as i32) / denom_gain.re;
    if !gain.is_finite() {
        return Err(Error::Numerical(
            "butterworth gain overflowed; reduce the order or the cut-off".into(),
        ));
    }

    // Numerator gain * (1 + z^-1)^n.
    let mut b = vec![0.0; n + 1];
    let mut binom = 1.0;
    for (j, slot) in b.iter_mut().enumerate() {
        *slot = gain * binom;
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    RationalTransferFunction::new(b, a, TfDomain::Z, Some(1.0 / fs))
}

/// Causal IIR application: the recursive solution of the filter's
/// difference equation (alias for simulation).
pub fn iir_apply(tf: &RationalTransferFunction, u: &DiscreteSignal) -> Result<DiscreteSignal> {
    tf.simulate(u)
}

/// Zero-phase IIR application: forward pass, reverse, second pass, reverse,
/// with mirror-reflected padding at both ends to suppress edge transients.
pub fn iir_zero_phase(
    tf: &RationalTransferFunction,
    u: &DiscreteSignal,
) -> Result<DiscreteSignal> {
    if tf.domain() != TfDomain::Z {
        return Err(Error::Argument(
            "zero-phase filtering requires a z-domain filter".into(),
        ));
    }
    if tf.stability()? != Stability::Stable {
        return Err(Error::Argument(
            "zero-phase filtering requires a strictly stable filter".into(),
        ));
    }
    let pad = 3 * tf.a().len().max(tf.b().len());
    if u.len() <= pad {
        return Err(Error::Argument(format!(
            "signal length {} must exceed the padding length {pad}",
            u.len()
        )));
    }
    let x = u.samples();
    let n = x.len();
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in 0..pad {
        ext.push(x[pad - i]);
    }
    ext.extend_from_slice(x);
    for i in 0..pad {
        ext.push(x[n - 2 - i]);
    }

    let forward = tf.simulate(&DiscreteSignal::new(ext)?)?;
    let mut rev: Vec<f64> = forward.samples().to_vec();
    rev.reverse();
    let backward = tf.simulate(&DiscreteSignal::new(rev)?)?;
    let mut out: Vec<f64> = backward.samples().to_vec();
    out.reverse();
    let trimmed = out[pad..pad + n].to_vec();
    match u.sample_rate() {
        Some(fs) => DiscreteSignal::with_sample_rate(trimmed, fs),
        None => DiscreteSignal::new(trimmed),
    }
}

fn validate_fir_length(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Argument(format!(
            "FIR length must be odd and at least 3, got {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::sample_continuous;
    use crate::spectral::dtft;

    #[test]
    fn ideal_lowpass_allpass_limit() {
        let h = ideal_lowpass_ir(PI, 7).unwrap();
        assert_eq!(h[3], 1.0);
        for (k, &v) in h.iter().enumerate() {
            if k != 3 {
                assert!(v.abs() < 1e-16, "tap {k} = {v}");
            }
        }
    }

    #[test]
    fn ideal_lowpass_center_and_symmetry() {
        // fc = 200 Hz at fs = 2 kHz maps to theta_c = pi/5.
        let h = ideal_lowpass_ir(PI / 5.0, 5).unwrap();
        assert!((h[2] - 0.2).abs() < 1e-15);
        for k in 0..5 {
            assert_eq!(h[k], h[4 - k]);
        }
        assert!(ideal_lowpass_ir(0.0, 5).is_err());
        assert!(ideal_lowpass_ir(3.5, 5).is_err());
    }

    #[test]
    fn window_formula_values() {
        let w = window(WindowKind::Hamming, 5).unwrap();
        let expect = [0.08, 0.54, 1.0, 0.54, 0.08];
        for (got, want) in w.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(window(WindowKind::Rectangular, 3).unwrap(), vec![1.0; 3]);
        assert!(window(WindowKind::Hamming, 1).is_err());
    }

    #[test]
    fn window_kind_parses_known_names_only() {
        assert_eq!(WindowKind::parse("hamming").unwrap(), WindowKind::Hamming);
        assert_eq!(
            WindowKind::parse("blackman").unwrap().name(),
            "blackman"
        );
        assert!(matches!(
            WindowKind::parse("kaiser"),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn windows_are_symmetric() {
        for kind in [
            WindowKind::Rectangular,
            WindowKind::Hanning,
            WindowKind::Hamming,
            WindowKind::Blackman,
        ] {
            for n in [4, 5, 8, 33] {
                let w = window(kind, n).unwrap();
                for k in 0..n {
                    assert_eq!(w[k], w[n - 1 - k], "{kind:?} length {n} index {k}");
                }
            }
        }
    }

    #[test]
    fn firwin_matches_hand_computed_taps() {
        // Windowed-normalized sinc for N=5, fc=10 Hz, fs=1 kHz, Hamming,
        // worked out term by term from the design formulas.
        let frozen = [
            0.035638361711606573,
            0.241034568214606,
            0.44665414014757476,
            0.241034568214606,
            0.035638361711606573,
        ];
        // Independent scalar recomputation of the same numbers.
        let theta_c = 2.0 * PI * 10.0 / 1000.0;
        let alpha = 2.0;
        let mut oracle = [0.0; 5];
        let mut sum = 0.0;
        for (k, slot) in oracle.iter_mut().enumerate() {
            let m = k as f64 - alpha;
            let ideal = if k == 2 {
                theta_c / PI
            } else {
                (m * theta_c).sin() / (PI * m)
            };
            let w = 0.54 - 0.46 * (2.0 * PI * k as f64 / 4.0).cos();
            *slot = ideal * w;
            sum += *slot;
        }
        for v in &mut oracle {
            *v /= sum;
        }
        for (o, f) in oracle.iter().zip(&frozen) {
            assert!((o - f).abs() < 1e-15, "oracle drifted from frozen values");
        }

        let design = firwin(5, 10.0, 1000.0, WindowKind::Hamming).unwrap();
        for (got, want) in design.taps().iter().zip(&frozen) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn firwin_invariants() {
        let design = firwin(41, 150.0, 2000.0, WindowKind::Blackman).unwrap();
        let taps = design.taps();
        let sum: f64 = taps.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for k in 0..taps.len() {
            assert!((taps[k] - taps[taps.len() - 1 - k]).abs() < 1e-12);
        }
        assert_eq!(design.group_delay(), 20);

        let dc = dtft(&DiscreteSignal::new(taps.to_vec()).unwrap(), &[0.0]).bins()[0];
        assert!((dc.re - 1.0).abs() < 1e-12 && dc.im.abs() < 1e-12);

        assert!(firwin(4, 10.0, 100.0, WindowKind::Hamming).is_err());
        assert!(firwin(5, 60.0, 100.0, WindowKind::Hamming).is_err());
    }

    #[test]
    fn firwin_stopband_attenuation() {
        let design = firwin(511, 200.0, 2000.0, WindowKind::Hamming).unwrap();
        let taps = DiscreteSignal::new(design.taps().to_vec()).unwrap();
        let theta_c = 2.0 * PI * 200.0 / 2000.0;
        let thetas: Vec<f64> = (0..200)
            .map(|i| 2.0 * theta_c + (PI - 2.0 * theta_c) * i as f64 / 199.0)
            .collect();
        for bin in dtft(&taps, &thetas).bins() {
            assert!(bin.norm() < 0.01, "stop-band leakage {}", bin.norm());
        }
    }

    #[test]
    fn complement_examples() {
        let fir = FirDesign {
            taps: vec![0.25, 0.5, 0.25],
            cutoff: 1.0,
            sample_rate: 8.0,
            window_kind: WindowKind::Rectangular,
        };
        assert_eq!(highpass_complement(&fir), vec![-0.25, 0.5, -0.25]);

        // Complement plus original rebuilds the delayed impulse exactly.
        let design = firwin(21, 5.0, 50.0, WindowKind::Hanning).unwrap();
        let comp = highpass_complement(&design);
        for (k, (&t, &c)) in design.taps().iter().zip(&comp).enumerate() {
            let expect = if k == design.group_delay() { 1.0 } else { 0.0 };
            assert_eq!(t + c, expect);
        }
    }

    #[test]
    fn spectral_reverse_matches_complement_at_quarter_rate() {
        // On the raw windowed half-band response the two high-pass routes
        // have identical magnitude: the window midpoint is one, so the
        // amplitude satisfies A(theta) + A(pi - theta) = 1 exactly.
        let n = 31;
        let ideal = ideal_lowpass_ir(PI / 2.0, n).unwrap();
        let w = window(WindowKind::Hamming, n).unwrap();
        let taps: Vec<f64> = ideal.iter().zip(&w).map(|(h, w)| h * w).collect();
        let alpha = (n - 1) / 2;
        let comp: Vec<f64> = taps
            .iter()
            .enumerate()
            .map(|(k, &t)| if k == alpha { 1.0 - t } else { -t })
            .collect();
        let rev: Vec<f64> = taps
            .iter()
            .enumerate()
            .map(|(k, &t)| if k % 2 == 0 { t } else { -t })
            .collect();
        let thetas: Vec<f64> = (0..128).map(|i| PI * i as f64 / 127.0).collect();
        let rev_spec = dtft(&DiscreteSignal::new(rev).unwrap(), &thetas);
        let comp_spec = dtft(&DiscreteSignal::new(comp).unwrap(), &thetas);
        for (r, c) in rev_spec.bins().iter().zip(comp_spec.bins()) {
            assert!((r.norm() - c.norm()).abs() < 1e-9);
        }

        // Unit-dc normalization perturbs the identity at the 1e-3 level;
        // the two public routes still agree to that scale.
        let design = firwin(n, 250.0, 1000.0, WindowKind::Hamming).unwrap();
        let rev = DiscreteSignal::new(spectral_reverse(&design)).unwrap();
        let comp = DiscreteSignal::new(highpass_complement(&design)).unwrap();
        let rev_spec = dtft(&rev, &thetas);
        let comp_spec = dtft(&comp, &thetas);
        for (r, c) in rev_spec.bins().iter().zip(comp_spec.bins()) {
            assert!((r.norm() - c.norm()).abs() < 5e-3);
        }
    }

    #[test]
    fn butterworth_first_order_half_power() {
        let fs = 1000.0;
        let fc = 250.0;
        let tf = butterworth(1, fc, fs).unwrap();
        let z = Complex64::from_polar(1.0, 2.0 * PI * fc / fs);
        let mag = tf.eval(z).unwrap().norm();
        assert!((mag - 1.0 / 2f64.sqrt()).abs() < 1e-6, "got {mag}");
    }

    #[test]
    fn butterworth_order_eleven() {
        let tf = butterworth(11, 200.0, 2000.0).unwrap();
        assert_eq!(tf.stability().unwrap(), Stability::Stable);
        let dc = tf.eval(Complex64::new(1.0, 0.0)).unwrap().norm();
        assert!((dc - 1.0).abs() < 1e-9);
        let z = Complex64::from_polar(1.0, 2.0 * PI * 200.0 / 2000.0);
        let mag = tf.eval(z).unwrap().norm();
        assert!((mag - 1.0 / 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn butterworth_rejects_extreme_orders() {
        assert!(butterworth(0, 10.0, 100.0).is_err());
        assert!(matches!(
            butterworth(21, 10.0, 100.0),
            Err(Error::Numerical(_))
        ));
        assert!(butterworth(2, 60.0, 100.0).is_err());
    }

    #[test]
    fn apply_delta_taps_is_identity() {
        let fir = FirDesign {
            taps: vec![1.0],
            cutoff: 1.0,
            sample_rate: 8.0,
            window_kind: WindowKind::Rectangular,
        };
        let u = DiscreteSignal::new(vec![0.5, -1.0, 2.0]).unwrap();
        assert_eq!(fir.apply(&u).unwrap().samples(), u.samples());
    }

    #[test]
    fn zero_phase_fir_preserves_inband_tone() {
        let fs = 2000.0;
        let design = firwin(511, 200.0, fs, WindowKind::Hamming).unwrap();
        let tone = sample_continuous(|t| (2.0 * PI * 50.0 * t).sin(), fs, 4096, 0.0).unwrap();
        let filtered = design.zero_phase(&tone).unwrap();
        let alpha = design.group_delay();
        // Mid-signal: same tone, no phase shift, unit amplitude.
        for k in alpha..(4096 - alpha) {
            let expect = (2.0 * PI * 50.0 * k as f64 / fs).sin();
            assert!(
                (filtered.samples()[k] - expect).abs() < 0.01,
                "sample {k}: {} vs {expect}",
                filtered.samples()[k]
            );
        }
    }

    #[test]
    fn zero_phase_iir_passes_constants() {
        let tf = butterworth(4, 50.0, 1000.0).unwrap();
        let u = DiscreteSignal::new(vec![0.75; 512]).unwrap();
        let y = iir_zero_phase(&tf, &u).unwrap();
        for k in 100..412 {
            assert!((y.samples()[k] - 0.75).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_phase_iir_rejects_unstable_and_short() {
        let unstable = RationalTransferFunction::new(
            vec![1.0],
            vec![1.0, -1.5],
            TfDomain::Z,
            Some(0.001),
        )
        .unwrap();
        let u = DiscreteSignal::new(vec![1.0; 64]).unwrap();
        assert!(iir_zero_phase(&unstable, &u).is_err());

        let stable = butterworth(4, 50.0, 1000.0).unwrap();
        let short = DiscreteSignal::new(vec![1.0; 10]).unwrap();
        assert!(iir_zero_phase(&stable, &short).is_err());
    }
}
