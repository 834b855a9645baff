//! Vertex and network probability mass functions.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

const SUM_TOL: f64 = 1e-10;

/// Which estimator produced a vertex PMF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "estimator", rename_all = "kebab-case")]
pub enum Estimator {
    Mle,
    Laplace { tau: f64 },
    GoodTuring,
    Stein { tau: f64 },
}

impl Estimator {
    /// Additive flattening constant, if the estimator has one.
    pub fn tau(&self) -> Option<f64> {
        match *self {
            Estimator::Laplace { tau } | Estimator::Stein { tau } => Some(tau),
            Estimator::Mle => Some(0.0),
            Estimator::GoodTuring => None,
        }
    }
}

/// Discrete probability measure `p(x)` on the vertices with its CDF
/// `F(0) = 0, F(j) = Σ_{x ≤ j} p(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexPmf {
    probs: Vec<f64>,
    cdf: Vec<f64>,
    estimator: Estimator,
}

impl VertexPmf {
    pub fn new(probs: Vec<f64>, estimator: Estimator) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Invalid("empty probability vector".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Invalid("probabilities must be finite and nonnegative".into()));
        }
        let mut cdf = Vec::with_capacity(probs.len() + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cdf.push(acc);
        }
        if (acc - 1.0).abs() > SUM_TOL {
            return Err(Error::Invalid(format!("probabilities sum to {acc}, not 1")));
        }
        // Pin the grid to [0, 1] so that u = 1 always lands on a breakpoint.
        for f in cdf.iter_mut() {
            *f = f.min(1.0);
        }
        *cdf.last_mut().expect("n + 1 entries") = 1.0;
        Ok(VertexPmf { probs, cdf, estimator })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Cumulative vector of length `n + 1`; these are the quantile-grid
    /// breakpoints `u_0 = 0 < u_1 < … < u_n = 1`.
    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn estimator(&self) -> Estimator {
        self.estimator
    }

    /// Left-continuous step quantile: the 0-based vertex `j` with
    /// `F(j-1) < u ≤ F(j)`. Defined for `u ∈ (0, 1]`.
    pub fn quantile(&self, u: f64) -> Result<usize> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Invalid(format!("quantile level {u} outside (0, 1]")));
        }
        let upper = &self.cdf[1..];
        let j = upper.partition_point(|&f| f < u);
        if j < upper.len() {
            return Ok(j);
        }
        // u slightly above a rounded F(n): last vertex with positive mass.
        Ok(self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(self.probs.len() - 1))
    }

    /// Fails with the first zero-probability vertex, naming it by `labels`.
    pub fn require_positive(&self, labels: &[String]) -> Result<()> {
        match self.probs.iter().position(|&p| p <= 0.0) {
            Some(i) => Err(Error::ZeroProbability {
                vertex: labels.get(i).cloned().unwrap_or_else(|| (i + 1).to_string()),
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "estimator", rename_all = "kebab-case")]
pub enum NetworkEstimator {
    Mle,
    Laplace2d { tau: f64 },
}

/// Joint probability `P(x, y)` over vertex pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkPmf {
    matrix: DMatrix<f64>,
    estimator: NetworkEstimator,
}

impl NetworkPmf {
    pub fn new(matrix: DMatrix<f64>, estimator: NetworkEstimator) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Invalid("joint probabilities must be finite and nonnegative".into()));
        }
        let total = matrix.sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Invalid(format!("joint probabilities sum to {total}, not 1")));
        }
        Ok(NetworkPmf { matrix, estimator })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn estimator(&self) -> NetworkEstimator {
        self.estimator
    }

    pub fn marginal(&self) -> Vec<f64> {
        self.matrix.row_iter().map(|r| r.sum()).collect()
    }
}

/// `p(j) = d_j / N`. Fails on isolated vertices.
pub fn vertex_pmf_mle(g: &Graph) -> Result<VertexPmf> {
    g.require_no_isolated()?;
    let n_total = g.total_mass();
    VertexPmf::new(g.degrees().iter().map(|d| d / n_total).collect(), Estimator::Mle)
}

/// `P = A / N`.
pub fn network_pmf_mle(g: &Graph) -> Result<NetworkPmf> {
    let n_total = g.total_mass();
    if !(n_total > 0.0) {
        return Err(Error::Invalid("graph has zero total edge mass".into()));
    }
    NetworkPmf::new(g.adjacency() / n_total, NetworkEstimator::Mle)
}
