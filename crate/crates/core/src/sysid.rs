//! Lag-matrix construction, ridge-regularized coefficient identification,
//! and free-run forecasting of SISO LTI models.
//!
//! The regression stacks lagged copies of the input and output as columns;
//! the weight vector multiplies them directly, so the feedback entries carry
//! the negated normalized feedback coefficients of the difference equation.
//! Both the raw weights and the normalized coefficient form are exposed.

use crate::error::{Error, Result};
use crate::lti::{RationalTransferFunction, TfDomain};
use crate::signal::DiscreteSignal;

/// Lag-structured data matrix and regression target.
///
/// Columns are `u(0), u(-1), ..., u(-n_b), y(-1), ..., y(-n_a)`; row `r`
/// holds the source signals at index `r - lag`, reading indices before the
/// start as zero (at-rest pre-history).
#[derive(Debug, Clone, PartialEq)]
pub struct HankelRegression {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    target: Vec<f64>,
    n_b: usize,
    n_a: usize,
}

/// Output of [`HankelRegression::ridge_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeSolution {
    /// Raw regression weights `[b0..b_nb, -a1..-a_na]` (normalized, a0 = 1).
    pub weights: Vec<f64>,
    /// Norm of the normal-equation residual `(H'H + aI) w - H'y`.
    pub residual_norm: f64,
    /// Power-iteration estimate of the normal matrix's condition number.
    pub condition_estimate: f64,
}

impl HankelRegression {
    /// Assemble the lag matrix from equal-length input and output records.
    pub fn build(
        u: &DiscreteSignal,
        y: &DiscreteSignal,
        n_b: usize,
        n_a: usize,
    ) -> Result<Self> {
        if u.len() != y.len() {
            return Err(Error::Argument(format!(
                "input and output lengths differ: {} vs {}",
                u.len(),
                y.len()
            )));
        }
        if u.is_empty() {
            return Err(Error::Argument("signals must be non-empty".into()));
        }
        let rows = u.len();
        let cols = n_b + 1 + n_a;
        let mut data = Vec::with_capacity(rows * cols);
        let at = |x: &DiscreteSignal, idx: i64| -> f64 {
            if idx < 0 {
                0.0
            } else {
                x.samples()[idx as usize]
            }
        };
        for r in 0..rows as i64 {
            for lag in 0..=n_b as i64 {
                data.push(at(u, r - lag));
            }
            for lag in 1..=n_a as i64 {
                data.push(at(y, r - lag));
            }
        }
        Ok(Self {
            data,
            rows,
            cols,
            target: y.samples().to_vec(),
            n_b,
            n_a,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Drop the leading `max(n_b, n_a)` rows, whose lag columns read the
    /// artificial zero pre-history.
    pub fn drop_contaminated(&self) -> Result<Self> {
        let drop = self.n_b.max(self.n_a);
        if drop >= self.rows {
            return Err(Error::Argument(format!(
                "cannot drop {drop} rows from a {}-row regression",
                self.rows
            )));
        }
        Ok(Self {
            data: self.data[drop * self.cols..].to_vec(),
            rows: self.rows - drop,
            cols: self.cols,
            target: self.target[drop..].to_vec(),
            n_b: self.n_b,
            n_a: self.n_a,
        })
    }

    /// Closed-form ridge solution `w = (H'H + alpha I)^-1 H'y`, computed by
    /// a Cholesky factorization of the normal matrix (never an explicit
    /// inverse) with iterative refinement of the solve residual.
    pub fn ridge_solve(&self, alpha: f64) -> Result<RidgeSolution> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::Argument(format!(
                "regularization must be a finite non-negative value, got {alpha}"
            )));
        }
        let p = self.cols;
        // Normal matrix G = H'H + alpha I and right-hand side H'y.
        let mut gram = vec![0.0; p * p];
        let mut rhs = vec![0.0; p];
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..p {
                rhs[i] += row[i] * self.target[r];
                for j in i..p {
                    gram[i * p + j] += row[i] * row[j];
                }
            }
        }
        for i in 0..p {
            gram[i * p + i] += alpha;
            for j in 0..i {
                gram[i * p + j] = gram[j * p + i];
            }
        }

        let chol = cholesky(&gram, p).map_err(|e| {
            if alpha == 0.0 {
                Error::Numerical(
                    "normal matrix is numerically singular; retry with alpha > 0".into(),
                )
            } else {
                e
            }
        })?;

        let condition_estimate = estimate_condition(&gram, &chol, p);
        if alpha == 0.0 && !(condition_estimate < 1e12) {
            return Err(Error::Numerical(format!(
                "normal matrix condition estimate {condition_estimate:.3e} is too large for an \
                 unregularized solve; retry with alpha > 0"
            )));
        }

        let mut weights = chol_solve(&chol, p, &rhs);
        // Refinement passes keep the normal-equation residual near rounding
        // level even for moderately ill-conditioned data.
        for _ in 0..2 {
            let r = normal_residual(&gram, p, &weights, &rhs);
            let correction = chol_solve(&chol, p, &r);
            for (w, c) in weights.iter_mut().zip(&correction) {
                *w -= c;
            }
        }
        let residual_norm = normal_residual(&gram, p, &weights, &rhs)
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        if residual_norm > 1e-8 * rhs_norm {
            return Err(Error::Numerical(format!(
                "normal-equation residual {residual_norm:.3e} exceeds 1e-8 * {rhs_norm:.3e}"
            )));
        }
        Ok(RidgeSolution {
            weights,
            residual_norm,
            condition_estimate,
        })
    }

    /// One-step-ahead prediction `H w`: feedback columns hold measured data.
    pub fn one_step_prediction(&self, weights: &[f64]) -> Result<DiscreteSignal> {
        if weights.len() != self.cols {
            return Err(Error::Argument(format!(
                "weight vector length {} does not match {} columns",
                weights.len(),
                self.cols
            )));
        }
        let samples = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(weights)
                    .map(|(h, w)| h * w)
                    .sum()
            })
            .collect();
        DiscreteSignal::new(samples)
    }
}

/// Free-run forecast: the identified recursion driven by `u` with its own
/// past predictions in the feedback columns, starting at rest.
pub fn free_run(
    weights: &[f64],
    n_b: usize,
    n_a: usize,
    u: &DiscreteSignal,
) -> Result<DiscreteSignal> {
    if weights.len() != n_b + 1 + n_a {
        return Err(Error::Argument(format!(
            "weight vector length {} does not match n_b + 1 + n_a = {}",
            weights.len(),
            n_b + 1 + n_a
        )));
    }
    let x = u.samples();
    let mut y = vec![0.0; x.len()];
    for k in 0..x.len() {
        let mut acc = 0.0;
        for lag in 0..=n_b {
            if k >= lag {
                acc += weights[lag] * x[k - lag];
            }
        }
        for lag in 1..=n_a {
            if k >= lag {
                acc += weights[n_b + lag] * y[k - lag];
            }
        }
        y[k] = acc;
    }
    DiscreteSignal::new(y)
}

/// Reassemble the identified weights into the normalized transfer function:
/// `b = w[0..=n_b]`, `a = [1, -w[n_b+1], ..., -w[n_b+n_a]]`.
pub fn to_transfer_function(
    weights: &[f64],
    n_b: usize,
    n_a: usize,
    dt: f64,
) -> Result<RationalTransferFunction> {
    if weights.len() != n_b + 1 + n_a {
        return Err(Error::Argument(format!(
            "weight vector length {} does not match n_b + 1 + n_a = {}",
            weights.len(),
            n_b + 1 + n_a
        )));
    }
    let b = weights[..=n_b].to_vec();
    let mut a = Vec::with_capacity(n_a + 1);
    a.push(1.0);
    a.extend(weights[n_b + 1..].iter().map(|w| -w));
    RationalTransferFunction::new(b, a, TfDomain::Z, Some(dt))
}

/// Dense lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix in row-major storage.
fn cholesky(g: &[f64], p: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut sum = g[i * p + j];
            for k in 0..j {
                sum -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                if !(sum > 0.0) {
                    return Err(Error::Numerical(format!(
                        "matrix is not positive definite at pivot {i}"
                    )));
                }
                l[i * p + j] = sum.sqrt();
            } else {
                l[i * p + j] = sum / l[j * p + j];
            }
        }
    }
    Ok(l)
}

fn chol_solve(l: &[f64], p: usize, rhs: &[f64]) -> Vec<f64> {
    let mut x = rhs.to_vec();
    for i in 0..p {
        for k in 0..i {
            x[i] -= l[i * p + k] * x[k];
        }
        x[i] /= l[i * p + i];
    }
    for i in (0..p).rev() {
        for k in (i + 1)..p {
            x[i] -= l[k * p + i] * x[k];
        }
        x[i] /= l[i * p + i];
    }
    x
}

fn mat_vec(g: &[f64], p: usize, v: &[f64]) -> Vec<f64> {
    (0..p)
        .map(|i| g[i * p..(i + 1) * p].iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn normal_residual(g: &[f64], p: usize, w: &[f64], rhs: &[f64]) -> Vec<f64> {
    mat_vec(g, p, w)
        .iter()
        .zip(rhs)
        .map(|(gv, r)| gv - r)
        .collect()
}

/// Condition estimate of the normal matrix: power iteration for the largest
/// eigenvalue, inverse iteration through the Cholesky factor for the
/// smallest.
fn estimate_condition(g: &[f64], chol: &[f64], p: usize) -> f64 {
    let normalize = |v: &mut Vec<f64>| -> f64 {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            for x in v.iter_mut() {
                *x /= n;
            }
        }
        n
    };
    let mut v = vec![1.0 / (p as f64).sqrt(); p];
    let mut lambda_max = 0.0;
    for _ in 0..40 {
        let mut next = mat_vec(g, p, &v);
        lambda_max = normalize(&mut next);
        v = next;
    }
    let mut w = vec![1.0 / (p as f64).sqrt(); p];
    let mut inv_norm = 0.0;
    for _ in 0..40 {
        let mut next = chol_solve(chol, p, &w);
        inv_norm = normalize(&mut next);
        w = next;
    }
    if inv_norm > 0.0 {
        lambda_max * inv_norm
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{white_noise, NoiseDistribution, NoiseSpec};

    fn sig(v: &[f64]) -> DiscreteSignal {
        DiscreteSignal::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_assembles_lagged_columns() {
        let u = sig(&[1.0, 2.0, 3.0]);
        let y = sig(&[4.0, 5.0, 6.0]);
        let h = HankelRegression::build(&u, &y, 1, 1).unwrap();
        assert_eq!(h.rows(), 3);
        assert_eq!(h.cols(), 3);
        assert_eq!(h.row(0), &[1.0, 0.0, 0.0]);
        assert_eq!(h.row(1), &[2.0, 1.0, 4.0]);
        assert_eq!(h.row(2), &[3.0, 2.0, 5.0]);
        assert_eq!(h.target(), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn build_degenerate_lag_structures() {
        let u = sig(&[1.0, 2.0, 3.0]);
        let y = sig(&[4.0, 5.0, 6.0]);
        // Pure moving-average columns.
        let ma = HankelRegression::build(&u, &y, 2, 0).unwrap();
        assert_eq!(ma.cols(), 3);
        assert_eq!(ma.row(2), &[3.0, 2.0, 1.0]);
        // Single feedback lag plus the instantaneous input column.
        let ar = HankelRegression::build(&u, &y, 0, 1).unwrap();
        assert_eq!(ar.cols(), 2);
        assert_eq!(ar.row(1), &[2.0, 4.0]);

        assert!(HankelRegression::build(&u, &sig(&[1.0]), 1, 1).is_err());
    }

    #[test]
    fn ridge_identity_fit() {
        // A single column equal to the target fits with unit weight.
        let y = sig(&[1.0, -2.0, 0.5, 3.0]);
        let h = HankelRegression::build(&y, &y, 0, 0).unwrap();
        let sol = h.ridge_solve(0.0).unwrap();
        assert_eq!(sol.weights.len(), 1);
        assert!((sol.weights[0] - 1.0).abs() < 1e-12);
        assert!(sol.condition_estimate < 1.0 + 1e-9);
    }

    #[test]
    fn ridge_shrinks_monotonically() {
        let spec = NoiseSpec::new(3, NoiseDistribution::Uniform01).unwrap();
        let u = white_noise(&spec, 400).unwrap();
        let tf = RationalTransferFunction::new(
            vec![1.0, 0.5],
            vec![1.0, -0.3],
            TfDomain::Z,
            Some(1.0),
        )
        .unwrap();
        let y = tf.simulate(&u).unwrap();
        let h = HankelRegression::build(&u, &y, 1, 1).unwrap();
        let mut last = f64::INFINITY;
        for alpha in [0.0, 0.1, 1.0, 10.0, 1e3, 1e6] {
            let sol = h.ridge_solve(alpha).unwrap();
            let norm = sol.weights.iter().map(|w| w * w).sum::<f64>().sqrt();
            assert!(norm <= last + 1e-12, "norm grew at alpha {alpha}");
            last = norm;
        }
        assert!(last < 1e-2, "large alpha should crush the weights");
    }

    #[test]
    fn noiseless_recovery_of_true_coefficients() {
        let spec = NoiseSpec::new(17, NoiseDistribution::Uniform01).unwrap();
        let u = white_noise(&spec, 600).unwrap();
        let tf = RationalTransferFunction::new(
            vec![1.0, 0.5],
            vec![1.0, -0.3, 0.1],
            TfDomain::Z,
            Some(1.0),
        )
        .unwrap();
        let y = tf.simulate(&u).unwrap();
        let h = HankelRegression::build(&u, &y, 1, 2)
            .unwrap()
            .drop_contaminated()
            .unwrap();
        let sol = h.ridge_solve(0.0).unwrap();
        let expect = [1.0, 0.5, 0.3, -0.1];
        for (got, want) in sol.weights.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn free_run_matches_recursive_simulation() {
        // Pins the sign convention of the feedback weights.
        let spec = NoiseSpec::new(23, NoiseDistribution::Uniform01).unwrap();
        let u = white_noise(&spec, 200).unwrap();
        let tf = RationalTransferFunction::new(
            vec![2.0, 1.8, -1.2],
            vec![1.0, -0.5, 0.0],
            TfDomain::Z,
            Some(1.0),
        )
        .unwrap();
        let direct = tf.simulate(&u).unwrap();
        let weights = [2.0, 1.8, -1.2, 0.5, 0.0];
        let forecast = free_run(&weights, 2, 2, &u).unwrap();
        for (a, b) in forecast.samples().iter().zip(direct.samples()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn one_step_with_zero_weights_is_zero() {
        let u = sig(&[1.0, 2.0, 3.0]);
        let y = sig(&[4.0, 5.0, 6.0]);
        let h = HankelRegression::build(&u, &y, 1, 1).unwrap();
        let pred = h.one_step_prediction(&[0.0, 0.0, 0.0]).unwrap();
        assert!(pred.samples().iter().all(|&v| v == 0.0));
        assert!(h.one_step_prediction(&[0.0]).is_err());
    }

    #[test]
    fn weights_convert_to_a_normalized_model() {
        let weights = [2.0, 1.8, -1.2, 0.5, 0.0];
        let tf = to_transfer_function(&weights, 2, 2, 0.02).unwrap();
        assert_eq!(tf.b(), &[2.0, 1.8, -1.2]);
        assert_eq!(tf.a(), &[1.0, -0.5, -0.0]);
        assert!(to_transfer_function(&weights, 1, 2, 0.02).is_err());
    }

    #[test]
    fn singular_unregularized_solve_advises_ridge() {
        // With the pre-history rows dropped, a constant input makes the two
        // lagged columns exactly collinear.
        let u = sig(&[1.0; 50]);
        let y = sig(&[2.0; 50]);
        let h = HankelRegression::build(&u, &y, 1, 0)
            .unwrap()
            .drop_contaminated()
            .unwrap();
        match h.ridge_solve(0.0) {
            Err(Error::Numerical(msg)) => assert!(msg.contains("alpha"), "{msg}"),
            other => panic!("expected numerical error, got {other:?}"),
        }
        // The regularized solve handles the same data.
        assert!(h.ridge_solve(1.0).is_ok());
    }

    #[test]
    fn drop_contaminated_removes_prefix_rows() {
        let u = sig(&[1.0, 2.0, 3.0, 4.0]);
        let y = sig(&[5.0, 6.0, 7.0, 8.0]);
        let h = HankelRegression::build(&u, &y, 1, 2).unwrap();
        let d = h.drop_contaminated().unwrap();
        assert_eq!(d.rows(), 2);
        assert_eq!(d.row(0), h.row(2));
        assert_eq!(d.target(), &[7.0, 8.0]);
    }
}
