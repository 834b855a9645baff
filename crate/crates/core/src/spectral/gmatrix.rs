//! Transform coefficients of the centered kernel in a chosen basis.

use nalgebra::DMatrix;

use super::basis::{BasisFamily, BasisKind};
use crate::error::{Error, Result};
use crate::pmf::{NetworkPmf, VertexPmf};

/// `M[j, k] = ⟨η_j, ∫(C − 1) η_k⟩` and the basis Gram matrix `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMatrix {
    m: DMatrix<f64>,
    s: Vec<f64>,
    basis: BasisFamily,
}

impl GMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Diagonal of `S`; every implemented basis has a diagonal Gram matrix.
    pub fn gram_diagonal(&self) -> &[f64] {
        &self.s
    }

    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.s))
    }

    pub fn basis(&self) -> &BasisFamily {
        &self.basis
    }

    pub fn kind(&self) -> BasisKind {
        self.basis.kind()
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }
}

/// Assembles `M[j, k] = a_j a_k P(j, k) − (a_j p_j)(a_k p_k)`.
///
/// The second term is `∫η_j ∫η_k`, the contribution of the constant part of
/// the kernel. `basis` must have been built from `p`.
pub fn g_matrix(joint: &NetworkPmf, p: &VertexPmf, basis: &BasisFamily) -> Result<GMatrix> {
    let n = p.len();
    if joint.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: joint.n() });
    }
    if basis.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: basis.len() });
    }
    if basis.probs() != p.probs() {
        return Err(Error::BasisMismatch("basis grid was built from a different vertex PMF".into()));
    }
    let a = basis.amplitudes();
    let mass: Vec<f64> = (0..n).map(|j| basis.integral(j)).collect();
    let pj = joint.matrix();
    let mut m = DMatrix::from_fn(n, n, |j, k| a[j] * a[k] * pj[(j, k)] - mass[j] * mass[k]);
    // Exact symmetry regardless of rounding in the product above.
    for j in 0..n {
        for k in j + 1..n {
            let v = 0.5 * (m[(j, k)] + m[(k, j)]);
            m[(j, k)] = v;
            m[(k, j)] = v;
        }
    }
    Ok(GMatrix { m, s: basis.gram_diagonal(), basis: basis.clone() })
}
