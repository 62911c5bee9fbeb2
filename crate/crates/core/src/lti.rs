//! Rational transfer functions in the s- and z-domains: evaluation,
//! pole/zero analysis, stability classification, recursive simulation,
//! closed-form time responses, and s-to-z discretization.
//!
//! Coefficient conventions follow each domain's natural polynomial:
//! s-domain lists are ascending powers of `s`; z-domain lists are ascending
//! powers of `z^-1`. All values are immutable and operations are pure.

use crate::error::{Error, Result};
use crate::poly;
use crate::signal::{elementary, DiscreteSignal, Elementary};
use crate::spectral::{Normalization, SpectrumFrame};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Complex-frequency domain of a transfer function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfDomain {
    /// Continuous (Laplace) domain; coefficients in ascending powers of s.
    S,
    /// Discrete domain; coefficients in ascending powers of z^-1.
    Z,
}

/// Stability classification against the domain's boundary with a 1e-9 band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Marginal,
    Unstable,
}

const BOUNDARY_TOL: f64 = 1e-9;

/// A ratio of real-coefficient polynomials identifying an LTI system.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTransferFunction {
    b: Vec<f64>,
    a: Vec<f64>,
    domain: TfDomain,
    dt: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TfDocument {
    domain: String,
    dt: Option<f64>,
    b: Vec<f64>,
    a: Vec<f64>,
}

fn effective_degree(coeffs: &[f64]) -> usize {
    coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
}

impl RationalTransferFunction {
    /// Store feedforward (`b`) and feedback (`a`) coefficients verbatim.
    ///
    /// `dt` is the sample period, required exactly when `domain` is `Z`.
    pub fn new(b: Vec<f64>, a: Vec<f64>, domain: TfDomain, dt: Option<f64>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Argument("coefficient lists must be non-empty".into()));
        }
        if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(Error::Argument("coefficients must be finite".into()));
        }
        match domain {
            TfDomain::Z => {
                if a[0] == 0.0 {
                    return Err(Error::Argument(
                        "z-domain leading feedback coefficient a0 must be nonzero".into(),
                    ));
                }
                match dt {
                    Some(dt) if dt > 0.0 && dt.is_finite() => {}
                    _ => {
                        return Err(Error::Argument(
                            "z-domain transfer functions require a positive sample period".into(),
                        ))
                    }
                }
            }
            TfDomain::S => {
                if dt.is_some() {
                    return Err(Error::Argument(
                        "s-domain transfer functions take no sample period".into(),
                    ));
                }
                if *a.last().unwrap() == 0.0 {
                    return Err(Error::Argument(
                        "s-domain highest-degree feedback coefficient must be nonzero".into(),
                    ));
                }
                if effective_degree(&b) > effective_degree(&a) {
                    return Err(Error::Argument(
                        "improper s-domain transfer function: numerator degree exceeds \
                         denominator degree"
                            .into(),
                    ));
                }
            }
        }
        Ok(Self { b, a, domain, dt })
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn domain(&self) -> TfDomain {
        self.domain
    }

    pub fn dt(&self) -> Option<f64> {
        self.dt
    }

    /// Coefficients rescaled to the normalized difference/differential
    /// equation: `a0 = 1` in the z-domain, leading `a = 1` in the s-domain.
    pub fn normalized_lccde(&self) -> (Vec<f64>, Vec<f64>) {
        let lead = match self.domain {
            TfDomain::Z => self.a[0],
            TfDomain::S => self.a[effective_degree(&self.a)],
        };
        (
            self.b.iter().map(|c| c / lead).collect(),
            self.a.iter().map(|c| c / lead).collect(),
        )
    }

    /// Evaluate the transfer function at a complex frequency `x`
    /// (a point `s` in the s-domain, a point `z` in the z-domain).
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        // The free variable of the stored polynomials: s, or z^-1.
        let var = match self.domain {
            TfDomain::S => x,
            TfDomain::Z => {
                if x.norm() == 0.0 {
                    if self.b.len() > 1 || self.a.len() > 1 {
                        return Err(Error::Domain(
                            "z-domain evaluation at z = 0 is outside the region of convergence"
                                .into(),
                        ));
                    }
                    x
                } else {
                    x.inv()
                }
            }
        };
        let num = poly::polyval_ascending(&self.b, var);
        let den = poly::polyval_ascending(&self.a, var);
        let den_scale: f64 = self.a.iter().map(|c| c.abs()).sum::<f64>()
            * (1.0 + var.norm()).powi(effective_degree(&self.a) as i32);
        if den.norm() < 1e-12 * den_scale.max(f64::MIN_POSITIVE) {
            let detail = match self.zpk() {
                Ok(zpk) => {
                    let nearest = zpk
                        .poles()
                        .iter()
                        .copied()
                        .min_by(|p, q| (p - x).norm().total_cmp(&(q - x).norm()));
                    match nearest {
                        Some(p) => format!("evaluation point {x} lies on the pole {p}"),
                        None => format!("denominator vanishes at {x}"),
                    }
                }
                Err(_) => format!("denominator vanishes at {x}"),
            };
            return Err(Error::Domain(detail));
        }
        Ok(num / den)
    }

    /// Frequency response on a real grid: substitutes `s = j*omega` in the
    /// s-domain or `z = e^{j*theta}` in the z-domain.
    pub fn freq_response(&self, grid: &[f64]) -> Result<SpectrumFrame> {
        let bins = grid
            .iter()
            .map(|&w| match self.domain {
                TfDomain::S => self.eval(Complex64::new(0.0, w)),
                TfDomain::Z => self.eval(Complex64::from_polar(1.0, w)),
            })
            .collect::<Result<Vec<_>>>()?;
        SpectrumFrame::new(bins, grid.to_vec(), Normalization::Raw)
    }

    /// Factored zeros/poles/gain form, using a root finder with a residual
    /// acceptance gate.
    pub fn zpk(&self) -> Result<ZeroPoleGain> {
        match self.domain {
            TfDomain::S => {
                let bd: Vec<f64> = self.b[..=effective_degree(&self.b)]
                    .iter()
                    .rev()
                    .copied()
                    .collect();
                let ad: Vec<f64> = self.a[..=effective_degree(&self.a)]
                    .iter()
                    .rev()
                    .copied()
                    .collect();
                let zeros = if bd.iter().all(|&c| c == 0.0) {
                    Vec::new()
                } else {
                    poly::roots(&bd)?
                };
                let poles = poly::roots(&ad)?;
                let gain = bd[0] / ad[0];
                ZeroPoleGain::new(zeros, poles, gain, TfDomain::S, None)
            }
            TfDomain::Z => {
                // Padded to common length, the stored ascending-z^-1 lists
                // are exactly the descending-z coefficient lists; trailing
                // zeros become roots at the origin (pure delays).
                let len = self.b.len().max(self.a.len());
                let mut bd = self.b.clone();
                bd.resize(len, 0.0);
                let mut ad = self.a.clone();
                ad.resize(len, 0.0);
                let zeros = if bd.iter().all(|&c| c == 0.0) {
                    Vec::new()
                } else {
                    poly::roots(&bd)?
                };
                let poles = poly::roots(&ad)?;
                let b_lead = bd.iter().copied().find(|&c| c != 0.0).unwrap_or(0.0);
                let gain = b_lead / ad[0];
                ZeroPoleGain::new(zeros, poles, gain, TfDomain::Z, self.dt)
            }
        }
    }

    /// Denominator roots alone; cheaper than a full factorization when the
    /// numerator is irrelevant.
    fn poles_only(&self) -> Result<Vec<Complex64>> {
        match self.domain {
            TfDomain::S => {
                let ad: Vec<f64> = self.a[..=effective_degree(&self.a)]
                    .iter()
                    .rev()
                    .copied()
                    .collect();
                poly::roots(&ad)
            }
            TfDomain::Z => {
                let len = self.b.len().max(self.a.len());
                let mut ad = self.a.clone();
                ad.resize(len, 0.0);
                poly::roots(&ad)
            }
        }
    }

    /// BIBO stability classification from the pole locations.
    pub fn stability(&self) -> Result<Stability> {
        let poles = &self.poles_only()?;
        Ok(match self.domain {
            TfDomain::S => {
                let max_re = poles.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
                if poles.is_empty() || max_re < -BOUNDARY_TOL {
                    Stability::Stable
                } else if max_re <= BOUNDARY_TOL {
                    Stability::Marginal
                } else {
                    Stability::Unstable
                }
            }
            TfDomain::Z => {
                let max_mod = poles.iter().map(|p| p.norm()).fold(f64::NEG_INFINITY, f64::max);
                if poles.is_empty() || max_mod < 1.0 - BOUNDARY_TOL {
                    Stability::Stable
                } else if max_mod <= 1.0 + BOUNDARY_TOL {
                    Stability::Marginal
                } else {
                    Stability::Unstable
                }
            }
        })
    }

    /// Recursive solution of the difference equation, starting at rest:
    /// `y[k] = sum_n (b_n/a0) u[k-n] - sum_{n>=1} (a_n/a0) y[k-n]`.
    pub fn simulate(&self, u: &DiscreteSignal) -> Result<DiscreteSignal> {
        if self.domain != TfDomain::Z {
            return Err(Error::Argument(
                "simulate requires a z-domain transfer function".into(),
            ));
        }
        let a0 = self.a[0];
        let ff: Vec<f64> = self.b.iter().map(|c| c / a0).collect();
        let fb: Vec<f64> = self.a[1..].iter().map(|c| c / a0).collect();
        let x = u.samples();
        let mut y = vec![0.0; x.len()];
        for k in 0..x.len() {
            let mut acc = 0.0;
            for (n, &bv) in ff.iter().enumerate() {
                if k >= n {
                    acc += bv * x[k - n];
                }
            }
            for (m, &av) in fb.iter().enumerate() {
                let n = m + 1;
                if k >= n {
                    acc -= av * y[k - n];
                }
            }
            y[k] = acc;
        }
        let fs = u
            .sample_rate()
            .or_else(|| self.dt.map(|dt| 1.0 / dt));
        match fs {
            Some(fs) => DiscreteSignal::with_sample_rate(y, fs),
            None => DiscreteSignal::new(y),
        }
    }

    /// Response to a unit impulse over `n` samples.
    pub fn impulse_response_z(&self, n: usize) -> Result<DiscreteSignal> {
        if n == 0 {
            return Err(Error::Argument("response length must be at least 1".into()));
        }
        self.simulate(&elementary(Elementary::Delta, n, 0, None)?)
    }

    /// Continuous impulse response on a time grid, by residue expansion of a
    /// strictly proper transfer function with simple poles.
    ///
    /// Grid points before time zero evaluate to zero (causal response).
    pub fn impulse_response_s(&self, t_grid: &[f64]) -> Result<Vec<f64>> {
        if self.domain != TfDomain::S {
            return Err(Error::Argument(
                "impulse_response_s requires an s-domain transfer function".into(),
            ));
        }
        if effective_degree(&self.b) >= effective_degree(&self.a) {
            return Err(Error::Argument(
                "impulse response expansion requires a strictly proper transfer function".into(),
            ));
        }
        let (poles, residues) = residues_ascending(&self.b, &self.a)?;
        exponential_mix(&poles, &residues, t_grid)
    }

    /// Continuous step response on a time grid: residue expansion of H(s)/s.
    pub fn step_response_s(&self, t_grid: &[f64]) -> Result<Vec<f64>> {
        if self.domain != TfDomain::S {
            return Err(Error::Argument(
                "step_response_s requires an s-domain transfer function".into(),
            ));
        }
        // Multiplying the denominator by s shifts the ascending coefficients.
        let mut den = Vec::with_capacity(self.a.len() + 1);
        den.push(0.0);
        den.extend_from_slice(&self.a);
        let (poles, residues) = residues_ascending(&self.b, &den)?;
        exponential_mix(&poles, &residues, t_grid)
    }

    /// Matched pole-zero discretization: finite poles and zeros map through
    /// `x -> e^{x dt}`, the numerator's zeros at infinity land on the Nyquist
    /// point `z = -1`, and the gain is set so the static gains agree
    /// (`H_z(1) = H_s(0)`, with integrator pairs s=0 / z=1 canceled).
    pub fn matched_z(&self, dt: f64) -> Result<Self> {
        if self.domain != TfDomain::S {
            return Err(Error::Argument(
                "matched_z requires an s-domain transfer function".into(),
            ));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Argument(format!(
                "sample period must be positive, got {dt}"
            )));
        }
        let zpk = self.zpk()?;
        require_simple(zpk.poles())?;
        let map = |x: Complex64| -> Result<Complex64> {
            if x.re * dt > 700.0 {
                return Err(Error::Numerical(format!(
                    "pole/zero {x} overflows the exponential map at dt = {dt}"
                )));
            }
            Ok((x * dt).exp())
        };
        let origin = |x: &Complex64| x.norm() <= 1e-12;

        let z_poles: Vec<Complex64> = zpk
            .poles()
            .iter()
            .map(|&p| map(p))
            .collect::<Result<_>>()?;
        let mut z_zeros: Vec<Complex64> = zpk
            .zeros()
            .iter()
            .map(|&z| map(z))
            .collect::<Result<_>>()?;
        let extra = zpk.poles().len().saturating_sub(zpk.zeros().len());
        z_zeros.extend(std::iter::repeat_n(Complex64::new(-1.0, 0.0), extra));

        // Static gain of the s-side and z-side with origin/unity factors
        // (index-aligned images of s = 0) removed from both products.
        let mut hs = Complex64::new(zpk.gain(), 0.0);
        let mut hz = Complex64::new(1.0, 0.0);
        for (i, z) in zpk.zeros().iter().enumerate() {
            if !origin(z) {
                hs *= -z;
                hz *= 1.0 - z_zeros[i];
            }
        }
        for _ in 0..extra {
            hz *= 2.0; // added zeros at -1 contribute (1 - (-1))
        }
        for (i, p) in zpk.poles().iter().enumerate() {
            if !origin(p) {
                hs /= -p;
                hz /= 1.0 - z_poles[i];
            }
        }
        if !hz.is_finite() || hz.norm() < 1e-300 {
            return Err(Error::Numerical(
                "static gain matching is degenerate for this pole set".into(),
            ));
        }
        let g = hs / hz;
        if g.im.abs() > 1e-9 * (1.0 + g.norm()) {
            return Err(Error::Numerical(
                "matched gain has a non-negligible imaginary part".into(),
            ));
        }
        ZeroPoleGain::new(z_zeros, z_poles, g.re, TfDomain::Z, Some(dt))?.to_tf()
    }

    /// Bilinear (trapezoidal) discretization by direct substitution of
    /// `s = K (1 - z^-1)/(1 + z^-1)`.
    ///
    /// With no pre-warp frequency, `K = 2/dt`. With `prewarp_fc` given, `K`
    /// is chosen so the discrete response equals the continuous response
    /// exactly at that frequency.
    pub fn bilinear(&self, dt: f64, prewarp_fc: Option<f64>) -> Result<Self> {
        if self.domain != TfDomain::S {
            return Err(Error::Argument(
                "bilinear requires an s-domain transfer function".into(),
            ));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Argument(format!(
                "sample period must be positive, got {dt}"
            )));
        }
        let k = match prewarp_fc {
            None => 2.0 / dt,
            Some(fc) => {
                let nyquist = 0.5 / dt;
                if !(fc > 0.0) || fc >= nyquist {
                    return Err(Error::Argument(format!(
                        "prewarp frequency must lie in (0, {nyquist}), got {fc}"
                    )));
                }
                2.0 * PI * fc / (PI * fc * dt).tan()
            }
        };
        let n = effective_degree(&self.a);
        let num = bilinear_substitute(&self.b, n, k);
        let den = bilinear_substitute(&self.a, n, k);
        Self::new(num, den, TfDomain::Z, Some(dt))
    }

    /// Serialize as the interchange JSON document `{domain, dt, b, a}`.
    pub fn to_json(&self) -> String {
        let doc = TfDocument {
            domain: match self.domain {
                TfDomain::S => "s".into(),
                TfDomain::Z => "z".into(),
            },
            dt: self.dt,
            b: self.b.clone(),
            a: self.a.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("plain struct serializes")
    }

    /// Parse the interchange JSON document, revalidating all invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TfDocument = serde_json::from_str(text)
            .map_err(|e| Error::Data(format!("malformed transfer-function JSON: {e}")))?;
        let domain = match doc.domain.as_str() {
            "s" => TfDomain::S,
            "z" => TfDomain::Z,
            other => {
                return Err(Error::Data(format!(
                    "unknown transfer-function domain {other:?}"
                )))
            }
        };
        Self::new(doc.b, doc.a, domain, doc.dt)
    }
}

/// Factored form: zeros, poles, and a real gain.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroPoleGain {
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
    gain: f64,
    domain: TfDomain,
    dt: Option<f64>,
}

impl ZeroPoleGain {
    /// Validates that complex roots occur in conjugate pairs (the
    /// coefficients they came from are real).
    pub fn new(
        zeros: Vec<Complex64>,
        poles: Vec<Complex64>,
        gain: f64,
        domain: TfDomain,
        dt: Option<f64>,
    ) -> Result<Self> {
        for set in [&zeros, &poles] {
            for r in set {
                if r.im.abs() > 1e-9 * (1.0 + r.norm())
                    && !set
                        .iter()
                        .any(|q| (q - r.conj()).norm() <= 1e-9 * (1.0 + r.norm()))
                {
                    return Err(Error::Argument(format!(
                        "complex root {r} has no conjugate partner"
                    )));
                }
            }
        }
        if !gain.is_finite() {
            return Err(Error::Argument("gain must be finite".into()));
        }
        Ok(Self {
            zeros,
            poles,
            gain,
            domain,
            dt,
        })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn domain(&self) -> TfDomain {
        self.domain
    }

    pub fn dt(&self) -> Option<f64> {
        self.dt
    }

    /// Expand back to coefficient form (denominator normalized to be monic).
    pub fn to_tf(&self) -> Result<RationalTransferFunction> {
        let pair_tol = 1e-6;
        let num = poly::poly_from_roots(&self.zeros, pair_tol)?;
        let den = poly::poly_from_roots(&self.poles, pair_tol)?;
        let num: Vec<f64> = num.iter().map(|c| c * self.gain).collect();
        match self.domain {
            TfDomain::S => {
                let b: Vec<f64> = num.iter().rev().copied().collect();
                let a: Vec<f64> = den.iter().rev().copied().collect();
                RationalTransferFunction::new(b, a, TfDomain::S, None)
            }
            TfDomain::Z => {
                if self.zeros.len() > self.poles.len() {
                    return Err(Error::UnsupportedStructure(
                        "z-domain factored form with more zeros than poles is non-causal".into(),
                    ));
                }
                // Descending-z lists read directly as ascending-z^-1 lists
                // once padded to common length; the pole surplus becomes a
                // leading delay on the numerator.
                let len = den.len();
                let mut b = vec![0.0; len - num.len()];
                b.extend_from_slice(&num);
                RationalTransferFunction::new(b, den, TfDomain::Z, self.dt)
            }
        }
    }
}

/// Pre-warped analog design frequency for the bilinear transform:
/// `f' = fs/pi * tan(pi fc / fs)`.
pub fn prewarp(fc: f64, fs: f64) -> Result<f64> {
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Argument(format!("fs must be positive, got {fs}")));
    }
    if !(fc > 0.0) || fc >= fs / 2.0 {
        return Err(Error::Argument(format!(
            "cut-off must lie in (0, fs/2) = (0, {}), got {fc}",
            fs / 2.0
        )));
    }
    Ok(fs / PI * (PI * fc / fs).tan())
}

fn require_simple(poles: &[Complex64]) -> Result<()> {
    let scale = poles.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
    for i in 0..poles.len() {
        for j in (i + 1)..poles.len() {
            if (poles[i] - poles[j]).norm() <= 1e-8 * scale.max(1e-30) {
                return Err(Error::UnsupportedStructure(format!(
                    "repeated pole near {} is not supported by the residue expansion",
                    poles[i]
                )));
            }
        }
    }
    Ok(())
}

/// Poles and residues of `num(s)/den(s)` (ascending coefficients), assuming
/// simple poles: `r_i = num(p_i) / den'(p_i)`.
fn residues_ascending(num: &[f64], den: &[f64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let den_desc: Vec<f64> = den[..=effective_degree(den)].iter().rev().copied().collect();
    let poles = poly::roots(&den_desc)?;
    require_simple(&poles)?;
    let dden = poly::poly_derivative_descending(&den_desc);
    let residues = poles
        .iter()
        .map(|&p| {
            let d = poly::polyval_descending(&dden, p);
            Ok(poly::polyval_ascending(num, p) / d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((poles, residues))
}

/// Evaluate `sum_i r_i e^{p_i t}` on the grid, discarding the imaginary
/// residue after checking it stays below 1e-9.
fn exponential_mix(
    poles: &[Complex64],
    residues: &[Complex64],
    t_grid: &[f64],
) -> Result<Vec<f64>> {
    t_grid
        .iter()
        .map(|&t| {
            if t < 0.0 {
                return Ok(0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (&p, &r) in poles.iter().zip(residues) {
                acc += r * (p * t).exp();
            }
            if acc.im.abs() > 1e-9 {
                return Err(Error::Numerical(format!(
                    "residue reconstruction has imaginary part {} at t = {t}",
                    acc.im
                )));
            }
            Ok(acc.re)
        })
        .collect()
}

/// Expand `sum_i c_i K^i (1 - x)^i (1 + x)^{n-i}` where `x = z^-1`.
fn bilinear_substitute(coeffs: &[f64], n: usize, k: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let mut k_pow = 1.0;
    for (i, &c) in coeffs.iter().enumerate().take(n + 1) {
        if c != 0.0 {
            let mut term = vec![1.0];
            for _ in 0..i {
                term = poly::poly_mul(&term, &[1.0, -1.0]);
            }
            for _ in 0..(n - i) {
                term = poly::poly_mul(&term, &[1.0, 1.0]);
            }
            for (j, &t) in term.iter().enumerate() {
                out[j] += c * k_pow * t;
            }
        }
        k_pow *= k;
    }
    out
}
