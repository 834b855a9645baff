//! Named spectral matrices ("shift operators") and their spectra through
//! the G-matrix route.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use super::basis::{build_basis, BasisKind};
use super::decomposition::{solve_spectrum_with, SolverMethod, SpectralDecomposition};
use super::gmatrix::{g_matrix, GMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pmf::{network_pmf_mle, vertex_pmf_mle};
use crate::smoothing::{smooth_network_pmf, smooth_transition, smooth_vertex_pmf, TauPolicy, TransitionMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "operator", rename_all = "kebab-case")]
pub enum OperatorKind {
    /// `L = D^{-1/2} A D^{-1/2}`.
    Laplacian,
    /// `L − √p √pᵀ`.
    CenteredLaplacian,
    /// `B = A − d dᵀ / N`.
    Modularity,
    /// `T = D⁻¹ A`.
    RandomWalk,
    /// `D_τ^{-1/2} A D_τ^{-1/2}`, `D_τ = D + τI`.
    RegLaplacianI { tau: f64 },
    /// `D_τ^{-1/2} A_τ D_τ^{-1/2}`, `A_τ = A + (τ/n) 11ᵀ`.
    RegLaplacianII { tau: f64 },
    /// `(1 − α) D⁻¹A + (α/n) 11ᵀ`.
    PageRank { alpha: f64 },
}

impl OperatorKind {
    /// Builds a kind from its command-line name.
    pub fn from_name(name: &str, tau: Option<f64>, alpha: Option<f64>) -> Result<OperatorKind> {
        let need_tau = || tau.ok_or_else(|| Error::Invalid(format!("operator {name} needs tau")));
        Ok(match name {
            "laplacian" => OperatorKind::Laplacian,
            "centered" => OperatorKind::CenteredLaplacian,
            "modularity" => OperatorKind::Modularity,
            "rw" => OperatorKind::RandomWalk,
            "reg1" => OperatorKind::RegLaplacianI { tau: need_tau()? },
            "reg2" => OperatorKind::RegLaplacianII { tau: need_tau()? },
            "pagerank" => OperatorKind::PageRank {
                alpha: alpha.ok_or_else(|| Error::Invalid("operator pagerank needs alpha".into()))?,
            },
            other => return Err(Error::Invalid(format!("unknown operator {other:?}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Laplacian => "laplacian",
            OperatorKind::CenteredLaplacian => "centered",
            OperatorKind::Modularity => "modularity",
            OperatorKind::RandomWalk => "rw",
            OperatorKind::RegLaplacianI { .. } => "reg1",
            OperatorKind::RegLaplacianII { .. } => "reg2",
            OperatorKind::PageRank { .. } => "pagerank",
        }
    }

    /// Whether the operator is defined on graphs with isolated vertices.
    pub fn is_regularized(&self) -> bool {
        match *self {
            OperatorKind::RegLaplacianI { tau } | OperatorKind::RegLaplacianII { tau } => tau > 0.0,
            _ => false,
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::RegLaplacianI { tau } | OperatorKind::RegLaplacianII { tau } => {
                write!(f, "{}(tau={tau})", self.name())
            }
            OperatorKind::PageRank { alpha } => write!(f, "pagerank(alpha={alpha})"),
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperator {
    kind: OperatorKind,
    matrix: DMatrix<f64>,
}

impl ShiftOperator {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(self.kind, OperatorKind::RandomWalk | OperatorKind::PageRank { .. })
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() {
        return Err(Error::NonFinite("tau".into()));
    }
    if tau < 0.0 {
        return Err(Error::NegativeTau(tau));
    }
    Ok(())
}

/// Closed-form operator matrix, built directly from `A` and `d`.
pub fn shift_operator(g: &Graph, kind: OperatorKind) -> Result<ShiftOperator> {
    let n = g.n();
    let a = g.adjacency();
    let d = g.degrees();
    let total = g.total_mass();
    let matrix = match kind {
        OperatorKind::Laplacian | OperatorKind::CenteredLaplacian => {
            g.require_no_isolated()?;
            let s: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
            let mut l = DMatrix::from_fn(n, n, |i, j| s[i] * a[(i, j)] * s[j]);
            if kind == OperatorKind::CenteredLaplacian {
                let r: Vec<f64> = d.iter().map(|x| (x / total).sqrt()).collect();
                l = DMatrix::from_fn(n, n, |i, j| l[(i, j)] - r[i] * r[j]);
            }
            l
        }
        OperatorKind::Modularity => {
            if !(total > 0.0) {
                return Err(Error::Invalid("graph has zero total edge mass".into()));
            }
            DMatrix::from_fn(n, n, |i, j| a[(i, j)] - d[i] * d[j] / total)
        }
        OperatorKind::RandomWalk => {
            g.require_no_isolated()?;
            DMatrix::from_fn(n, n, |i, j| a[(i, j)] / d[i])
        }
        OperatorKind::RegLaplacianI { tau } | OperatorKind::RegLaplacianII { tau } => {
            check_tau(tau)?;
            if tau == 0.0 {
                g.require_no_isolated()?;
            }
            let s: Vec<f64> = d.iter().map(|x| 1.0 / (x + tau).sqrt()).collect();
            let shift = if matches!(kind, OperatorKind::RegLaplacianII { .. }) { tau / n as f64 } else { 0.0 };
            DMatrix::from_fn(n, n, |i, j| s[i] * (a[(i, j)] + shift) * s[j])
        }
        OperatorKind::PageRank { alpha } => {
            smooth_transition(g, TransitionMode::Global { alpha })?.matrix().clone()
        }
    };
    Ok(ShiftOperator { kind, matrix })
}

/// The G-matrix whose spectrum reproduces `kind`:
///
/// * Laplacian, centered Laplacian, random walk: block-pulse basis on the
///   empirical measures.
/// * Modularity: characteristic basis on the empirical measures.
/// * Type-I: regularized block-pulse on `p̂_τ` with the empirical joint.
/// * Type-II: regularized block-pulse on `p̂_τ` with the smoothed joint.
///
/// PageRank has no G-matrix of its own; see [`operator_spectrum`].
pub fn operator_g_matrix(g: &Graph, kind: OperatorKind) -> Result<GMatrix> {
    match kind {
        OperatorKind::Laplacian
        | OperatorKind::CenteredLaplacian
        | OperatorKind::RandomWalk
        | OperatorKind::PageRank { .. } => {
            let p = vertex_pmf_mle(g)?;
            let b = build_basis(&p, BasisKind::BlockPulse)?;
            g_matrix(&network_pmf_mle(g)?, &p, &b)
        }
        OperatorKind::Modularity => {
            let p = vertex_pmf_mle(g)?;
            let b = build_basis(&p, BasisKind::Characteristic)?;
            g_matrix(&network_pmf_mle(g)?, &p, &b)
        }
        OperatorKind::RegLaplacianI { tau } => {
            check_tau(tau)?;
            let p = smooth_vertex_pmf(g, TauPolicy::Fixed(tau))?;
            let b = build_basis(&p, BasisKind::RegularizedBlockPulse { tau })?;
            g_matrix(&network_pmf_mle(g)?, &p, &b)
        }
        OperatorKind::RegLaplacianII { tau } => {
            check_tau(tau)?;
            let p = smooth_vertex_pmf(g, TauPolicy::Fixed(tau))?;
            let b = build_basis(&p, BasisKind::RegularizedBlockPulse { tau })?;
            g_matrix(&smooth_network_pmf(g, TauPolicy::Fixed(tau))?, &p, &b)
        }
    }
}

/// Top `m` nontrivial eigenpairs of `kind` on `g`.
///
/// For PageRank the pairs are derived from the Laplacian ones: the teleport
/// term is rank one, so `T_α` has eigenvalues `(1 − α) λ_k` with right
/// eigenvectors `φ_k + c_k 1`, `c_k = α s_k / ((1 − α) λ_k − 1)` and `s_k`
/// the plain mean of `φ_k`. Those vectors are not `p`-orthonormal.
pub fn operator_spectrum(g: &Graph, kind: OperatorKind, m: usize) -> Result<SpectralDecomposition> {
    operator_spectrum_with(g, kind, m, SolverMethod::Auto)
}

pub fn operator_spectrum_with(
    g: &Graph,
    kind: OperatorKind,
    m: usize,
    method: SolverMethod,
) -> Result<SpectralDecomposition> {
    if let OperatorKind::PageRank { alpha } = kind {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
    }
    let gm = operator_g_matrix(g, kind)?;
    let dec = solve_spectrum_with(&gm, m, method)?;
    let OperatorKind::PageRank { alpha } = kind else {
        return Ok(dec);
    };
    let n = dec.n();
    let values: Vec<f64> = dec.eigenvalues().iter().map(|l| (1.0 - alpha) * l).collect();
    let mut vectors = dec.phi().clone();
    for (k, &mu) in values.iter().enumerate() {
        if alpha == 0.0 {
            continue;
        }
        let mean = vectors.column(k).sum() / n as f64;
        let shift = alpha * mean / (mu - 1.0);
        vectors.column_mut(k).add_scalar_mut(shift);
    }
    Ok(SpectralDecomposition::from_parts(
        values,
        dec.theta().clone(),
        vectors,
        dec.weights().to_vec(),
        dec.basis(),
        dec.trivial_eigenvalue(),
    ))
}
