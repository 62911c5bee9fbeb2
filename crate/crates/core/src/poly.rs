//! Real-coefficient polynomial helpers shared by the transfer-function code:
//! evaluation, products, expansion from roots, and a Durand-Kerner root
//! finder with a residual contract.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Evaluate a polynomial with ascending-power coefficients at `x` (Horner).
pub(crate) fn polyval_ascending(coeffs: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Evaluate a polynomial with descending-power coefficients at `x`.
pub(crate) fn polyval_descending(coeffs: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        acc = acc * x + c;
    }
    acc
}

/// Product of two real polynomials (coefficients in matching order).
pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &av) in a.iter().enumerate() {
        for (j, &bv) in b.iter().enumerate() {
            out[i + j] += av * bv;
        }
    }
    out
}

/// Derivative of a descending-power polynomial.
pub(crate) fn poly_derivative_descending(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len() - 1;
    coeffs[..deg]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (deg - i) as f64)
        .collect()
}

/// Expand `prod_i (x - r_i)` into real descending-power coefficients.
///
/// Conjugate pairs are multiplied as real quadratics so the result is exactly
/// real; the roots must be conjugate-symmetric to `pair_tol`.
pub(crate) fn poly_from_roots(roots: &[Complex64], pair_tol: f64) -> Result<Vec<f64>> {
    let mut coeffs = vec![1.0];
    let mut pending: Vec<Complex64> = Vec::new();
    for &r in roots {
        if r.im.abs() <= pair_tol * (1.0 + r.norm()) {
            coeffs = poly_mul(&coeffs, &[1.0, -r.re]);
        } else if let Some(pos) = pending
            .iter()
            .position(|p| (p.conj() - r).norm() <= pair_tol * (1.0 + r.norm()))
        {
            let p = pending.swap_remove(pos);
            let re = 0.5 * (p.re + r.re);
            let norm_sqr = (p.norm() * r.norm()).max(0.0);
            coeffs = poly_mul(&coeffs, &[1.0, -2.0 * re, norm_sqr]);
        } else {
            pending.push(r);
        }
    }
    if !pending.is_empty() {
        return Err(Error::Numerical(format!(
            "{} complex roots have no conjugate partner",
            pending.len()
        )));
    }
    Ok(coeffs)
}

/// Roots of a real polynomial given with descending-power coefficients.
///
/// Durand-Kerner iteration with a residual acceptance gate: every returned
/// root satisfies `|p(r)| < 1e-8 * scale` where `scale` reflects the
/// coefficient magnitudes at the root. Roots at the origin are deflated
/// exactly beforehand.
pub(crate) fn roots(coeffs_descending: &[f64]) -> Result<Vec<Complex64>> {
    // Strip leading zeros (degree reduction).
    let first = coeffs_descending
        .iter()
        .position(|&c| c != 0.0)
        .ok_or_else(|| Error::Argument("zero polynomial has no defined roots".into()))?;
    let mut coeffs: Vec<f64> = coeffs_descending[first..].to_vec();

    // Deflate exact roots at the origin (trailing zero coefficients).
    let mut origin_roots = 0;
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        coeffs.pop();
        origin_roots += 1;
    }

    let deg = coeffs.len() - 1;
    let mut found = vec![Complex64::new(0.0, 0.0); origin_roots];
    if deg == 0 {
        return Ok(found);
    }

    // Monic normalization.
    let lead = coeffs[0];
    let monic: Vec<f64> = coeffs.iter().map(|&c| c / lead).collect();

    // Cauchy-style radius bound for the initial ring of estimates.
    let radius = 1.0
        + monic[1..]
            .iter()
            .map(|c| c.abs())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.35;
            Complex64::from_polar(radius * (0.5 + 0.5 * (k as f64 + 1.0) / deg as f64), angle)
        })
        .collect();

    let max_iter = 600;
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Coincident estimates: nudge apart and continue.
                z[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                continue;
            }
            let step = polyval_descending(&monic, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }

    let z = symmetrize_conjugates(z);

    // Residual gate after symmetrization: reject silent garbage whether or
    // not the step test converged (root clusters converge only linearly and
    // their points move under pairing, but the residual stays tiny there).
    let coeff_scale: f64 = coeffs.iter().map(|c| c.abs()).fold(0.0f64, f64::max);
    for &root in &z {
        let residual = polyval_descending(&coeffs, root).norm();
        let scale = coeff_scale * (1.0 + root.norm()).powi(deg as i32);
        if !(residual < 1e-8 * scale) {
            return Err(Error::Numerical(format!(
                "root finder residual {residual:.3e} exceeds tolerance near {root}"
            )));
        }
    }

    found.extend(z);
    Ok(found)
}

/// Force the root set of a real polynomial into exactly conjugate-paired
/// form. Near-real roots snap onto the axis; the rest are matched greedily
/// with their nearest conjugate partner and averaged. A true real-coefficient
/// root set is conjugate-symmetric up to solver error, so the matching always
/// balances out (surplus entries with the smallest imaginary parts are
/// treated as real).
fn symmetrize_conjugates(roots: Vec<Complex64>) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(roots.len());
    let mut upper: Vec<Complex64> = Vec::new();
    let mut lower: Vec<Complex64> = Vec::new();
    for r in roots {
        if r.im.abs() <= 1e-8 * (1.0 + r.norm()) {
            out.push(Complex64::new(r.re, 0.0));
        } else if r.im > 0.0 {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    // Balance the half-plane counts before pairing.
    while upper.len() > lower.len() {
        let i = (0..upper.len())
            .min_by(|&i, &j| upper[i].im.abs().total_cmp(&upper[j].im.abs()))
            .unwrap();
        out.push(Complex64::new(upper.swap_remove(i).re, 0.0));
    }
    while lower.len() > upper.len() {
        let i = (0..lower.len())
            .min_by(|&i, &j| lower[i].im.abs().total_cmp(&lower[j].im.abs()))
            .unwrap();
        out.push(Complex64::new(lower.swap_remove(i).re, 0.0));
    }
    for r in upper {
        let i = (0..lower.len())
            .min_by(|&i, &j| (lower[i].conj() - r).norm().total_cmp(&(lower[j].conj() - r).norm()))
            .expect("counts balanced above");
        let partner = lower.swap_remove(i);
        let avg = 0.5 * (r + partner.conj());
        out.push(avg);
        out.push(avg.conj());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_quadratic() {
        // x^2 + 2x + 5 = 0 -> -1 +/- 2j
        let r = roots(&[1.0, 2.0, 5.0]).unwrap();
        assert_eq!(r.len(), 2);
        let mut re: Vec<f64> = r.iter().map(|c| c.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-10 && (re[1] + 1.0).abs() < 1e-10);
        let mut im: Vec<f64> = r.iter().map(|c| c.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 2.0).abs() < 1e-10 && (im[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn roots_with_origin_deflation() {
        // x^3 - x^2 = x^2 (x - 1)
        let r = roots(&[1.0, -1.0, 0.0, 0.0]).unwrap();
        let zeros_at_origin = r.iter().filter(|c| c.norm() < 1e-12).count();
        assert_eq!(zeros_at_origin, 2);
        assert!(r.iter().any(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-10));
    }

    #[test]
    fn roots_conjugate_symmetry_random_polys() {
        let polys: [&[f64]; 3] = [
            &[1.0, 0.4, -0.3, 0.05, 0.7],
            &[2.0, -3.0, 1.5, 0.2],
            &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
        ];
        for p in polys {
            let rs = roots(p).unwrap();
            assert_eq!(rs.len(), p.len() - 1);
            for r in &rs {
                if r.im != 0.0 {
                    assert!(
                        rs.iter().any(|q| (q - r.conj()).norm() < 1e-9 * (1.0 + r.norm())),
                        "no conjugate partner for {r} in {rs:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn poly_from_roots_round_trip() {
        let coeffs = [1.0, -0.9, 0.35, 0.1];
        let rs = roots(&coeffs).unwrap();
        let back = poly_from_roots(&rs, 1e-6).unwrap();
        for (got, want) in back.iter().zip(&coeffs) {
            assert!((got - want).abs() < 1e-8);
        }
    }
}
