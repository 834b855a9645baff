//! Piecewise-constant orthogonal systems on the vertex quantile grid.
//!
//! Every family here is an indicator basis: `η_j(u) = a_j` on the cell
//! `(u_{j-1}, u_j]` and zero elsewhere, so the Gram matrix is diagonal with
//! entries `a_j² p_j` and everything downstream is exact cell arithmetic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmf::VertexPmf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum BasisKind {
    /// Amplitude `p_j^{-1/2}`: orthonormal in `L²[0, 1]`.
    BlockPulse,
    /// Amplitude 1: `∫η_j = ∫η_j² = p_j`.
    Characteristic,
    /// Block-pulse on the add-τ smoothed grid; needs a PMF produced with the
    /// same τ.
    RegularizedBlockPulse { tau: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisFamily {
    kind: BasisKind,
    grid: Vec<f64>,
    amplitudes: Vec<f64>,
    probs: Vec<f64>,
}

impl BasisFamily {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Breakpoints `0 = u_0 < u_1 < … < u_n = 1`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Cell widths the basis was built on.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Diagonal of the Gram matrix `⟨η_j, η_k⟩ = a_j² p_j δ_jk`.
    pub fn gram_diagonal(&self) -> Vec<f64> {
        self.amplitudes.iter().zip(&self.probs).map(|(a, p)| a * a * p).collect()
    }

    /// `⟨η_j, η_k⟩` in `L²[0, 1]`.
    pub fn inner(&self, j: usize, k: usize) -> f64 {
        if j == k {
            self.amplitudes[j] * self.amplitudes[j] * self.probs[j]
        } else {
            0.0
        }
    }

    /// `∫η_j = a_j p_j`.
    pub fn integral(&self, j: usize) -> f64 {
        self.amplitudes[j] * self.probs[j]
    }

    /// `η_j(u)` with the cells taken left-open, right-closed.
    pub fn eval(&self, j: usize, u: f64) -> f64 {
        if u > self.grid[j] && u <= self.grid[j + 1] {
            self.amplitudes[j]
        } else {
            0.0
        }
    }

    /// Coefficients of the constant function 1 in this basis.
    pub fn constant_coefficients(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| 1.0 / a).collect()
    }
}

/// Builds the basis on the quantile grid of `p`.
pub fn build_basis(p: &VertexPmf, kind: BasisKind) -> Result<BasisFamily> {
    let probs = p.probs().to_vec();
    let labels: Vec<String> = (1..=probs.len()).map(|i| i.to_string()).collect();
    let amplitudes = match kind {
        BasisKind::Characteristic => vec![1.0; probs.len()],
        BasisKind::BlockPulse => {
            p.require_positive(&labels)?;
            probs.iter().map(|q| 1.0 / q.sqrt()).collect()
        }
        BasisKind::RegularizedBlockPulse { tau } => {
            if tau < 0.0 {
                return Err(Error::NegativeTau(tau));
            }
            match p.estimator().tau() {
                Some(t) if (t - tau).abs() <= 1e-12 * tau.max(1.0) => {}
                _ => {
                    return Err(Error::BasisMismatch(format!(
                        "regularized basis with tau = {tau} needs a PMF smoothed with the same tau, got {:?}",
                        p.estimator()
                    )))
                }
            }
            p.require_positive(&labels)?;
            probs.iter().map(|q| 1.0 / q.sqrt()).collect()
        }
    };
    Ok(BasisFamily { kind, grid: p.cdf().to_vec(), amplitudes, probs })
}
