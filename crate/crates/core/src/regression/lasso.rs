//! Cyclic coordinate descent for `‖y − β₀ − Xβ‖² + λ‖β‖₁`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LassoOptions {
    /// Scale columns to unit variance; the penalty then acts on the scaled
    /// coefficients. Coefficients are always reported on the input scale.
    pub standardize: bool,
    /// Fit an unpenalized intercept.
    pub intercept: bool,
    /// Stop when no coefficient moves more than this in a sweep.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for LassoOptions {
    fn default() -> Self {
        LassoOptions { standardize: true, intercept: true, tol: 1e-8, max_sweeps: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LassoResult {
    pub intercept: f64,
    /// Coefficients on the input scale.
    pub beta: Vec<f64>,
    pub lambda: f64,
    /// Objective after each sweep, in the working (centered/scaled) problem.
    pub objective: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    /// Columns with no variation; their coefficient is fixed at 0.
    pub dropped: Vec<usize>,
}

impl LassoResult {
    pub fn predict(&self, x: &DMatrix<f64>) -> Vec<f64> {
        (0..x.nrows())
            .map(|i| self.intercept + (0..x.ncols()).map(|j| x[(i, j)] * self.beta[j]).sum::<f64>())
            .collect()
    }

    pub fn nonzero(&self) -> Vec<usize> {
        self.beta.iter().enumerate().filter(|(_, b)| **b != 0.0).map(|(j, _)| j).collect()
    }

    pub fn final_objective(&self) -> f64 {
        self.objective.last().copied().unwrap_or(f64::NAN)
    }
}

/// Centered and scaled copy of the problem.
pub(crate) struct Working {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub x_mean: Vec<f64>,
    pub x_scale: Vec<f64>,
    pub y_mean: f64,
    pub col_sq: Vec<f64>,
    pub dropped: Vec<usize>,
}

pub(crate) fn prepare(design: &DMatrix<f64>, y: &[f64], opts: &LassoOptions) -> Result<Working> {
    let (m, q) = design.shape();
    if y.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: y.len() });
    }
    if m == 0 {
        return Err(Error::Invalid("no observations".into()));
    }
    if design.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("regression input".into()));
    }
    let mf = m as f64;
    let mut x = design.clone();
    let mut x_mean = vec![0.0; q];
    let mut x_scale = vec![1.0; q];
    let mut dropped = Vec::new();
    for j in 0..q {
        let mut col = x.column_mut(j);
        if opts.intercept {
            x_mean[j] = col.sum() / mf;
            col.add_scalar_mut(-x_mean[j]);
        }
        let ss = col.norm_squared();
        if ss <= 1e-24 * mf * (1.0 + x_mean[j] * x_mean[j]) {
            dropped.push(j);
            col.fill(0.0);
            continue;
        }
        if opts.standardize {
            x_scale[j] = (ss / mf).sqrt();
            col /= x_scale[j];
        }
    }
    if !dropped.is_empty() {
        log::warn!("dropping {} constant design column(s): {:?}", dropped.len(), dropped);
    }
    let y_mean = if opts.intercept { y.iter().sum::<f64>() / mf } else { 0.0 };
    let yv = DVector::from_iterator(m, y.iter().map(|v| v - y_mean));
    let col_sq = (0..q).map(|j| x.column(j).norm_squared()).collect();
    Ok(Working { x, y: yv, x_mean, x_scale, y_mean, col_sq, dropped })
}

/// Smallest penalty with an all-zero solution: `2 max_j |x_jᵀ (y − ȳ)|`.
pub(crate) fn lambda_max_of(w: &Working) -> f64 {
    (0..w.x.ncols()).map(|j| 2.0 * w.x.column(j).dot(&w.y).abs()).fold(0.0, f64::max)
}

pub fn lambda_max(design: &DMatrix<f64>, y: &[f64], opts: &LassoOptions) -> Result<f64> {
    Ok(lambda_max_of(&prepare(design, y, opts)?))
}

fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

fn objective(resid: &DVector<f64>, beta: &[f64], lambda: f64) -> f64 {
    resid.norm_squared() + lambda * beta.iter().map(|b| b.abs()).sum::<f64>()
}

/// Runs coordinate descent on a prepared problem from `start` (working
/// scale) and returns working-scale coefficients with the sweep history.
pub(crate) fn descend(
    w: &Working,
    lambda: f64,
    start: &[f64],
    opts: &LassoOptions,
) -> (Vec<f64>, Vec<f64>, usize, bool) {
    let q = w.x.ncols();
    let mut beta = start.to_vec();
    for &j in &w.dropped {
        beta[j] = 0.0;
    }
    let mut resid = w.y.clone();
    for j in 0..q {
        if beta[j] != 0.0 {
            resid.axpy(-beta[j], &w.x.column(j), 1.0);
        }
    }
    let mut history: Vec<f64> = Vec::new();
    let half = lambda / 2.0;
    for sweep in 1..=opts.max_sweeps {
        let mut max_delta: f64 = 0.0;
        for j in 0..q {
            if w.col_sq[j] == 0.0 {
                continue;
            }
            let col = w.x.column(j);
            let rho = col.dot(&resid) + w.col_sq[j] * beta[j];
            let next = soft_threshold(rho, half) / w.col_sq[j];
            let delta = next - beta[j];
            if delta != 0.0 {
                resid.axpy(-delta, &col, 1.0);
                beta[j] = next;
                max_delta = max_delta.max(delta.abs());
            }
        }
        let obj = objective(&resid, &beta, lambda);
        if let Some(&prev) = history.last() {
            debug_assert!(
                obj <= prev + 1e-10 * prev.abs().max(1.0),
                "objective increased from {prev} to {obj} in sweep {sweep}"
            );
        }
        history.push(obj);
        if max_delta < opts.tol {
            return (beta, history, sweep, true);
        }
    }
    (beta, history, opts.max_sweeps, false)
}

pub(crate) fn finish(w: &Working, beta_work: &[f64], lambda: f64, history: Vec<f64>, sweeps: usize, converged: bool) -> LassoResult {
    let beta: Vec<f64> = beta_work.iter().zip(&w.x_scale).map(|(b, s)| b / s).collect();
    let intercept = w.y_mean - beta.iter().zip(&w.x_mean).map(|(b, m)| b * m).sum::<f64>();
    if !converged {
        log::warn!("coordinate descent stopped after {sweeps} sweeps without reaching tolerance");
    }
    LassoResult { intercept, beta, lambda, objective: history, sweeps, converged, dropped: w.dropped.clone() }
}

/// Lasso fit at a single penalty.
pub fn lasso_solve(design: &DMatrix<f64>, y: &[f64], lambda: f64, opts: &LassoOptions) -> Result<LassoResult> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Invalid(format!("penalty must be finite and nonnegative, got {lambda}")));
    }
    let w = prepare(design, y, opts)?;
    let start = vec![0.0; design.ncols()];
    let (beta, history, sweeps, converged) = descend(&w, lambda, &start, opts);
    Ok(finish(&w, &beta, lambda, history, sweeps, converged))
}

/// Fits a decreasing sequence of penalties, each warm-started from the last.
pub fn lasso_path(design: &DMatrix<f64>, y: &[f64], lambdas: &[f64], opts: &LassoOptions) -> Result<Vec<LassoResult>> {
    let w = prepare(design, y, opts)?;
    let mut start = vec![0.0; design.ncols()];
    let mut out = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Invalid(format!("penalty must be finite and nonnegative, got {lambda}")));
        }
        let (beta, history, sweeps, converged) = descend(&w, lambda, &start, opts);
        start.clone_from(&beta);
        out.push(finish(&w, &beta, lambda, history, sweeps, converged));
    }
    Ok(out)
}

/// `n` log-spaced values from `hi` down to `hi · ratio`.
pub fn log_grid(hi: f64, ratio: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), (hi * ratio).ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
