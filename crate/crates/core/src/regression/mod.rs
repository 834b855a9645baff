//! Graph-structured regression: spatial graph, KL basis columns as extra
//! regressors, and an L1-penalized fit.

mod lasso;
mod spatial;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use lasso::{lasso_path, lasso_solve, lambda_max, log_grid, LassoOptions, LassoResult};
pub use spatial::{
    build_spatial_graph, build_spatial_graph_weighted, coverage_radius, parse_spatial_csv, EdgeWeight,
    SpatialDataset,
};

use crate::error::{Error, Result};
use crate::smoothing::TauPolicy;
use crate::spectral::{operator_spectrum, OperatorKind};

/// How the lasso penalty is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum LambdaPolicy {
    Fixed { lambda: f64 },
    /// K-fold cross-validation over `grid` log-spaced values from `λ_max`
    /// down to `λ_max · ratio`.
    CrossValidated { folds: usize, grid: usize, ratio: f64, seed: u64 },
}

impl LambdaPolicy {
    pub fn auto(seed: u64) -> Self {
        LambdaPolicy::CrossValidated { folds: 10, grid: 50, ratio: 1e-4, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub lambdas: Vec<f64>,
    /// Mean held-out squared error per grid value.
    pub mse: Vec<f64>,
    pub best_lambda: f64,
    /// `1 − Σ held-out SSE / Σ held-out SST` at the chosen penalty.
    pub r2: f64,
}

fn sse(fit: &LassoResult, x: &DMatrix<f64>, y: &[f64]) -> f64 {
    fit.predict(x).iter().zip(y).map(|(p, v)| (p - v).powi(2)).sum()
}

fn rows(x: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), x.ncols(), |i, j| x[(idx[i], j)])
}

/// K-fold cross-validation with a seeded shuffle; each fold walks the grid
/// from the largest penalty down with warm starts. Ties go to the larger
/// penalty.
pub fn cross_validate(
    design: &DMatrix<f64>,
    y: &[f64],
    folds: usize,
    grid: usize,
    ratio: f64,
    seed: u64,
    opts: &LassoOptions,
) -> Result<CrossValidation> {
    let m = design.nrows();
    if folds < 2 || folds > m {
        return Err(Error::Invalid(format!("fold count {folds} must lie in 2..={m}")));
    }
    if grid == 0 || !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Invalid("penalty grid needs at least one value and a ratio in (0, 1)".into()));
    }
    let top = lambda_max(design, y, opts)?;
    let lambdas = if top > 0.0 { log_grid(top, ratio, grid) } else { vec![0.0] };

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of = vec![0; m];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % folds;
    }

    let mut total_sse = vec![0.0; lambdas.len()];
    let mut total_sst = 0.0;
    for f in 0..folds {
        let train: Vec<usize> = (0..m).filter(|&i| fold_of[i] != f).collect();
        let test: Vec<usize> = (0..m).filter(|&i| fold_of[i] == f).collect();
        let (xt, xv) = (rows(design, &train), rows(design, &test));
        let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let yv: Vec<f64> = test.iter().map(|&i| y[i]).collect();
        let path = lasso_path(&xt, &yt, &lambdas, opts)?;
        for (s, fit) in total_sse.iter_mut().zip(&path) {
            *s += sse(fit, &xv, &yv);
        }
        let train_mean = yt.iter().sum::<f64>() / yt.len() as f64;
        total_sst += yv.iter().map(|v| (v - train_mean).powi(2)).sum::<f64>();
    }
    let mut best = 0;
    for (i, &s) in total_sse.iter().enumerate() {
        if s < total_sse[best] {
            best = i;
        }
    }
    Ok(CrossValidation {
        mse: total_sse.iter().map(|s| s / m as f64).collect(),
        best_lambda: lambdas[best],
        r2: 1.0 - total_sse[best] / total_sst,
        lambdas,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionOptions {
    /// Number of KL basis columns (0 gives a covariates-only model).
    pub k: usize,
    pub operator: OperatorKind,
    /// Replaces the τ of a regularized operator, resolved on the spatial
    /// graph (so `Minimax` means `√N/n` of that graph).
    pub tau: Option<TauPolicy>,
    pub lambda: LambdaPolicy,
    pub lasso: LassoOptions,
    pub edge_weight: EdgeWeight,
}

impl RegressionOptions {
    pub fn new(k: usize, operator: OperatorKind, lambda: LambdaPolicy) -> Self {
        RegressionOptions {
            k,
            operator,
            tau: None,
            lambda,
            lasso: LassoOptions::default(),
            edge_weight: EdgeWeight::Binary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    /// Column names, basis columns first (`phi1`, …) then covariates.
    pub names: Vec<String>,
    pub beta: Vec<f64>,
    pub intercept: f64,
    pub lambda: f64,
    /// In-sample coefficient of determination.
    pub r2: f64,
    /// Cross-validated R² when the penalty was chosen by CV.
    pub cv_r2: Option<f64>,
    /// Indices of nonzero coefficients.
    pub selected: Vec<usize>,
    pub objective: f64,
    pub operator: OperatorKind,
    /// `√N/n` of the spatial graph.
    pub minimax_tau: f64,
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub basis: DMatrix<f64>,
}

fn with_tau(kind: OperatorKind, tau: f64) -> OperatorKind {
    match kind {
        OperatorKind::RegLaplacianI { .. } => OperatorKind::RegLaplacianI { tau },
        OperatorKind::RegLaplacianII { .. } => OperatorKind::RegLaplacianII { tau },
        other => other,
    }
}

/// Builds `[Φ | X]` from the top-`k` KL basis of the spatial graph and fits
/// the lasso, reporting in-sample (and, under CV, held-out) R².
pub fn spectral_regression(data: &SpatialDataset, opts: &RegressionOptions) -> Result<RegressionFit> {
    let n = data.len();
    let g = build_spatial_graph_weighted(data.coords(), opts.edge_weight)?;
    if opts.k > n.saturating_sub(1) {
        return Err(Error::Invalid(format!("k = {} exceeds the {} nontrivial basis functions", opts.k, n - 1)));
    }
    let operator = match opts.tau {
        Some(policy) => with_tau(opts.operator, policy.resolve(&g)?),
        None => opts.operator,
    };
    let (basis, eigenvalues) = if opts.k > 0 {
        let dec = operator_spectrum(&g, operator, opts.k)?;
        (dec.phi().clone(), dec.eigenvalues().to_vec())
    } else {
        (DMatrix::zeros(n, 0), Vec::new())
    };

    let x = data.covariates();
    let q = opts.k + x.ncols();
    let design = DMatrix::from_fn(n, q, |i, j| if j < opts.k { basis[(i, j)] } else { x[(i, j - opts.k)] });
    let mut names: Vec<String> = (1..=opts.k).map(|j| format!("phi{j}")).collect();
    names.extend(data.covariate_names().iter().cloned());

    let y = data.response();
    let (lambda, cv_r2) = match opts.lambda {
        LambdaPolicy::Fixed { lambda } => (lambda, None),
        LambdaPolicy::CrossValidated { folds, grid, ratio, seed } => {
            let cv = cross_validate(&design, y, folds, grid, ratio, seed, &opts.lasso)?;
            (cv.best_lambda, Some(cv.r2))
        }
    };
    let fit = lasso_solve(&design, y, lambda, &opts.lasso)?;
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let r2 = 1.0 - sse(&fit, &design, y) / tss;

    Ok(RegressionFit {
        names,
        selected: fit.nonzero(),
        objective: fit.final_objective(),
        beta: fit.beta,
        intercept: fit.intercept,
        lambda,
        r2,
        cv_r2,
        operator,
        minimax_tau: g.total_mass().sqrt() / n as f64,
        eigenvalues,
        basis,
    })
}
