//! File formats: signal CSV (`k,t,value` with the time column optional),
//! single-column tap CSV, spectrum CSV, and per-scale MRA CSV.
//!
//! Floats are written with 17 significant digits and `\n` line endings so
//! identical runs produce byte-identical files.

use anyhow::{bail, Context, Result};
use ltikit::signal::DiscreteSignal;
use ltikit::spectral::SpectrumFrame;
use std::path::Path;

/// 17 significant digits, locale-independent.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_signal(path: &Path, signal: &DiscreteSignal) -> Result<()> {
    let mut out = String::new();
    match signal.sample_rate() {
        Some(fs) => {
            out.push_str("k,t,value\n");
            for (i, &v) in signal.samples().iter().enumerate() {
                let k = signal.start_index() + i as i64;
                let t = k as f64 / fs;
                out.push_str(&format!("{k},{},{}\n", fmt_float(t), fmt_float(v)));
            }
        }
        None => {
            out.push_str("k,value\n");
            for (i, &v) in signal.samples().iter().enumerate() {
                let k = signal.start_index() + i as i64;
                out.push_str(&format!("{k},{}\n", fmt_float(v)));
            }
        }
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_signal(path: &Path) -> Result<DiscreteSignal> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("signal file is empty")?;
    let has_time = match header.trim() {
        "k,t,value" => true,
        "k,value" => false,
        other => bail!("unrecognized signal header {other:?} (expected k,t,value or k,value)"),
    };

    let mut ks: Vec<i64> = Vec::new();
    let mut ts: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if has_time { 3 } else { 2 };
        if fields.len() != expected {
            bail!("line {}: expected {expected} fields, got {}", lineno + 2, fields.len());
        }
        let k: i64 = fields[0]
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad index", lineno + 2))?;
        if let Some(&prev) = ks.last() {
            if k <= prev {
                bail!("line {}: sample indices must be strictly increasing", lineno + 2);
            }
        }
        ks.push(k);
        if has_time {
            ts.push(
                fields[1]
                    .trim()
                    .parse()
                    .with_context(|| format!("line {}: bad time", lineno + 2))?,
            );
        }
        let v: f64 = fields[expected - 1]
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad value", lineno + 2))?;
        if !v.is_finite() {
            bail!("line {}: non-finite value", lineno + 2);
        }
        values.push(v);
    }
    if values.is_empty() {
        bail!("signal file has no samples");
    }
    let start = ks[0];
    let mut signal = DiscreteSignal::new(values)?.with_start_index(start);
    if has_time && ts.len() >= 2 {
        let dt = (ts[1] - ts[0]) / (ks[1] - ks[0]) as f64;
        if dt > 0.0 && dt.is_finite() {
            signal = signal.set_sample_rate(1.0 / dt)?;
        }
    }
    Ok(signal)
}

pub fn write_taps(path: &Path, taps: &[f64]) -> Result<()> {
    let mut out = String::from("tap\n");
    for &t in taps {
        out.push_str(&fmt_float(t));
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_taps(path: &Path) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("tap file is empty")?;
    if header.trim() != "tap" {
        bail!("unrecognized tap header {header:?} (expected 'tap')");
    }
    let mut taps = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: f64 = line
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad tap", lineno + 2))?;
        if !v.is_finite() {
            bail!("line {}: non-finite tap", lineno + 2);
        }
        taps.push(v);
    }
    if taps.is_empty() {
        bail!("tap file has no entries");
    }
    Ok(taps)
}

pub fn write_spectrum(path: &Path, frame: &SpectrumFrame, f_hz: &[f64]) -> Result<()> {
    let mut out = String::from("n,f_hz,re,im,mag,phase\n");
    for (n, (bin, &f)) in frame.bins().iter().zip(f_hz).enumerate() {
        out.push_str(&format!(
            "{n},{},{},{},{},{}\n",
            fmt_float(f),
            fmt_float(bin.re),
            fmt_float(bin.im),
            fmt_float(bin.norm()),
            fmt_float(bin.arg())
        ));
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_scales(path: &Path, scales: &[DiscreteSignal]) -> Result<()> {
    let mut out = String::from("k");
    for m in 1..=scales.len() {
        out.push_str(&format!(",scale_{m}"));
    }
    out.push('\n');
    let n = scales.first().map(|s| s.len()).unwrap_or(0);
    for k in 0..n {
        out.push_str(&k.to_string());
        for scale in scales {
            out.push(',');
            out.push_str(&fmt_float(scale.samples()[k]));
        }
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
