//! The GraField kernel `C(x, y) = P(x, y) / (p(x) p(y))`.
//!
//! The continuous field on the unit square is piecewise constant on the
//! cells `(F(x-1), F(x)] × (F(y-1), F(y)]`, so every integral against it is
//! an exact cell-weighted sum and the field is never sampled.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pmf::{NetworkPmf, VertexPmf};

#[derive(Debug, Clone, PartialEq)]
pub struct GraFieldMatrix {
    c: DMatrix<f64>,
    p: Vec<f64>,
}

impl GraFieldMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.c[(x, y)]
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Vertex masses that define the cell widths.
    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// Area `p(x) p(y)` of cell `(x, y)`.
    pub fn cell_measure(&self, x: usize, y: usize) -> f64 {
        self.p[x] * self.p[y]
    }

    /// `∬ C = Σ C(x, y) p(x) p(y)`; equals 1 for a consistent pair of PMFs.
    pub fn total_mass(&self) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for y in 0..n {
            for x in 0..n {
                s += self.c[(x, y)] * self.p[x] * self.p[y];
            }
        }
        s
    }
}

/// Builds `C` from a joint and a vertex PMF. Every `p(x)` must be positive.
pub fn empirical_grafield(joint: &NetworkPmf, p: &VertexPmf) -> Result<GraFieldMatrix> {
    let n = p.len();
    if joint.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: joint.n() });
    }
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    p.require_positive(&labels)?;
    let probs = p.probs();
    let c = DMatrix::from_fn(n, n, |x, y| joint.matrix()[(x, y)] / (probs[x] * probs[y]));
    Ok(GraFieldMatrix { c, p: probs.to_vec() })
}

/// `∬ (C − 1)²`, summed over every cell including the diagonal.
pub fn graph_entropy(field: &GraFieldMatrix) -> f64 {
    let n = field.n();
    let mut s = 0.0;
    for y in 0..n {
        for x in 0..n {
            let dev = field.c[(x, y)] - 1.0;
            s += dev * dev * field.p[x] * field.p[y];
        }
    }
    s
}
