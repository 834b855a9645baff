//! Generalized eigenproblem `M θ = λ S θ` and the vertex-domain KL basis.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::basis::BasisKind;
use super::eigen::{self, EigenPairs};
use super::gmatrix::GMatrix;
use crate::error::{Error, Result};

/// Largest `n` solved with the dense symmetric solver under
/// [`SolverMethod::Auto`].
pub const DENSE_LIMIT: usize = 2000;

const LANCZOS_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-8;
/// `u` counts as an exact eigenvector below this relative residual.
const SPLIT_TOL: f64 = 1e-10;
/// Eigenvalues this close (relative) to the constant one share its eigenspace.
const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

/// Nontrivial eigenpairs ordered by `|λ|` (descending), with `φ_k` the
/// expansion `Σ_j θ_jk η_j` read off at each vertex cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    theta: DMatrix<f64>,
    phi: DMatrix<f64>,
    weights: Vec<f64>,
    basis: BasisKind,
    trivial: Option<f64>,
}

impl SpectralDecomposition {
    pub(crate) fn from_parts(
        eigenvalues: Vec<f64>,
        theta: DMatrix<f64>,
        phi: DMatrix<f64>,
        weights: Vec<f64>,
        basis: BasisKind,
        trivial: Option<f64>,
    ) -> Self {
        SpectralDecomposition { eigenvalues, theta, phi, weights, basis, trivial }
    }

    /// Signed eigenvalues `λ_1, …, λ_m`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `μ_k = |λ_k|`.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.abs()).collect()
    }

    /// Basis coefficients, one column per eigenpair.
    pub fn theta(&self) -> &DMatrix<f64> {
        &self.theta
    }

    /// Vertex-domain functions, one column per eigenpair.
    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    /// Vertex masses under which the `φ_k` are orthonormal.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    /// Eigenvalue of the excluded constant direction, when it was computed.
    pub fn trivial_eigenvalue(&self) -> Option<f64> {
        self.trivial
    }

    /// Number of retained pairs.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.phi.nrows()
    }

    /// First `k` pairs only.
    pub fn truncated(&self, k: usize) -> SpectralDecomposition {
        let k = k.min(self.len());
        SpectralDecomposition {
            eigenvalues: self.eigenvalues[..k].to_vec(),
            theta: self.theta.columns(0, k).into_owned(),
            phi: self.phi.columns(0, k).into_owned(),
            weights: self.weights.clone(),
            basis: self.basis,
            trivial: self.trivial,
        }
    }
}

/// Top `m` nontrivial pairs of the G-matrix pencil, solver chosen by size.
pub fn solve_spectrum(gm: &GMatrix, m: usize) -> Result<SpectralDecomposition> {
    solve_spectrum_with(gm, m, SolverMethod::Auto)
}

/// Top `m` nontrivial pairs of `M θ = λ S θ`.
///
/// The pencil is reduced to `S^{-1/2} M S^{-1/2}`. Exactly one pair is
/// dropped: the one whose eigenfunction has the largest overlap with the
/// constant function. `m` is clamped to `n − 1`.
pub fn solve_spectrum_with(gm: &GMatrix, m: usize, method: SolverMethod) -> Result<SpectralDecomposition> {
    let n = gm.n();
    let cap = n.saturating_sub(1);
    let m = if m > cap {
        log::warn!("requested {m} eigenpairs but only {cap} nontrivial pairs exist; returning {cap}");
        cap
    } else {
        m
    };

    let s = gm.gram_diagonal();
    if s.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    let s_inv_sqrt: Vec<f64> = s.iter().map(|v| 1.0 / v.sqrt()).collect();
    let mat = gm.matrix();
    let c = DMatrix::from_fn(n, n, |j, k| s_inv_sqrt[j] * mat[(j, k)] * s_inv_sqrt[k]);

    let use_dense = match method {
        SolverMethod::Dense => true,
        SolverMethod::Lanczos => false,
        SolverMethod::Auto => n <= DENSE_LIMIT,
    };
    let pairs = if use_dense || m + 1 >= n {
        eigen::dense(&c)
    } else {
        eigen::lanczos(&c, m + 1, LANCZOS_TOL)?
    };
    let complete = pairs.values.len() == n;
    let EigenPairs { values, mut vectors } = pairs;

    // Overlap of each unit eigenvector with S^{1/2}·(constant function).
    let amplitudes = gm.basis().amplitudes();
    let constant = DVector::from_fn(n, |j, _| s[j].sqrt() / amplitudes[j]);
    let unit_const = &constant / constant.norm();
    split_constant(&c, &values, &mut vectors, &unit_const);
    let overlap: Vec<f64> = (0..values.len()).map(|k| vectors.column(k).dot(&unit_const).abs()).collect();

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .total_cmp(&values[a].abs())
            .then(values[b].total_cmp(&values[a]))
            .then(a.cmp(&b))
    });
    let best = order
        .iter()
        .copied()
        .fold(None::<usize>, |acc, k| match acc {
            Some(b) if overlap[b] >= overlap[k] => Some(b),
            _ => Some(k),
        });
    // A partial spectrum may not contain the constant direction at all; it
    // then sits below the retained pairs and nothing needs removing.
    let trivial = match best {
        Some(b) if complete || overlap[b] * overlap[b] > 0.5 => Some(b),
        _ => None,
    };
    let kept: Vec<usize> = order.into_iter().filter(|&k| Some(k) != trivial).take(m).collect();

    let mut theta = DMatrix::zeros(n, m);
    let mut phi = DMatrix::zeros(n, m);
    for (col, &k) in kept.iter().enumerate() {
        let mut th = DVector::from_fn(n, |j, _| s_inv_sqrt[j] * vectors[(j, k)]);
        let mut ph = DVector::from_fn(n, |j, _| th[j] * amplitudes[j]);
        if sign_flip(&ph) {
            th.neg_mut();
            ph.neg_mut();
        }
        theta.set_column(col, &th);
        phi.set_column(col, &ph);
    }
    let eigenvalues: Vec<f64> = kept.iter().map(|&k| values[k]).collect();

    let m_norm = mat.norm();
    for (col, &lam) in eigenvalues.iter().enumerate() {
        let th = theta.column(col);
        let r = mat * th - DVector::from_fn(n, |j, _| lam * s[j] * th[j]);
        if r.norm() > RESIDUAL_TOL * m_norm.max(1e-300) {
            return Err(Error::Numerical(format!(
                "eigenpair {} has residual {:e} (tolerance {:e})",
                col + 1,
                r.norm(),
                RESIDUAL_TOL * m_norm
            )));
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        theta,
        phi,
        weights: gm.basis().probs().to_vec(),
        basis: gm.kind(),
        trivial: trivial.map(|k| values[k]),
    })
}

/// When the constant direction `u` is itself an eigenvector, a solver may
/// return any basis of its eigenspace, mixing `u` into pairs that should be
/// orthogonal to it. Rotate that eigenspace so that one vector is the
/// projection of `u` and the rest are orthogonal to it.
fn split_constant(c: &DMatrix<f64>, values: &[f64], vectors: &mut DMatrix<f64>, u: &DVector<f64>) {
    let scale = c.norm().max(1e-300);
    let rho = u.dot(&(c * u));
    if (c * u - u * rho).norm() > SPLIT_TOL * scale {
        return;
    }
    let cluster: Vec<usize> =
        (0..values.len()).filter(|&k| (values[k] - rho).abs() <= CLUSTER_TOL * scale).collect();
    let r = cluster.len();
    if r < 2 {
        return;
    }
    let block = DMatrix::from_fn(vectors.nrows(), r, |i, q| vectors[(i, cluster[q])]);
    let w = block.transpose() * u;
    let wn = w.norm();
    if wn < 0.5 {
        return;
    }
    // Householder reflection H with H e₁ = w / |w|.
    let mut h = DMatrix::identity(r, r);
    let mut v = -&w / wn;
    v[0] += 1.0;
    let vv = v.dot(&v);
    if vv > 1e-30 {
        h -= &v * v.transpose() * (2.0 / vv);
    }
    let rotated = block * h;
    for (q, &k) in cluster.iter().enumerate() {
        vectors.set_column(k, &rotated.column(q));
    }
}

/// True when the largest-magnitude entry is negative; the first index wins
/// among entries equal in magnitude up to rounding.
fn sign_flip(v: &DVector<f64>) -> bool {
    let top = v.amax();
    if top == 0.0 {
        return false;
    }
    let lead = v.iter().position(|x| x.abs() >= top * (1.0 - 1e-9)).unwrap_or(0);
    v[lead] < 0.0
}
