//! Independent reference computations. Nothing here goes through the
//! G-matrix: every oracle starts from the adjacency matrix.
#![allow(dead_code)]

use grafield::Graph;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenvalues sorted ascending.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `√d_x / √N`, written out from the degrees.
pub fn sqrt_p(g: &Graph) -> DVector<f64> {
    let total: f64 = g.degrees().iter().sum();
    DVector::from_iterator(g.n(), g.degrees().iter().map(|d| (d / total).sqrt()))
}

/// `D^{-1/2} A D^{-1/2} − √p √pᵀ`.
pub fn centered_laplacian(g: &Graph) -> DMatrix<f64> {
    let a = g.adjacency();
    let d = g.degrees();
    let r = sqrt_p(g);
    DMatrix::from_fn(g.n(), g.n(), |i, j| a[(i, j)] / (d[i] * d[j]).sqrt() - r[i] * r[j])
}

/// `B = A − d dᵀ / N`.
pub fn modularity(g: &Graph) -> DMatrix<f64> {
    let a = g.adjacency();
    let d = g.degrees();
    let total: f64 = d.iter().sum();
    DMatrix::from_fn(g.n(), g.n(), |i, j| a[(i, j)] - d[i] * d[j] / total)
}

/// `(D⁻¹A)^t`, by repeated multiplication.
pub fn walk_power(g: &Graph, t: u32) -> DMatrix<f64> {
    let a = g.adjacency();
    let d = g.degrees();
    let step = DMatrix::from_fn(g.n(), g.n(), |i, j| a[(i, j)] / d[i]);
    let mut out = DMatrix::identity(g.n(), g.n());
    for _ in 0..t {
        out = &out * &step;
    }
    out
}

/// Largest distance from a unit vector to a subspace spanned by the
/// orthonormal columns of `basis`.
pub fn distance_to_span(x: &DVector<f64>, basis: &DMatrix<f64>) -> f64 {
    let x = x / x.norm();
    let proj = basis * (basis.transpose() * &x);
    (x - proj).norm()
}
