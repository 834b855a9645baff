//! Diffusion-map coordinates `x ↦ (λ_k^t φ_k(x))_k` and diffusion distance.

use nalgebra::DMatrix;

use super::decomposition::SpectralDecomposition;
use crate::error::{Error, Result};

/// Powers at or above this trigger the near-bipartite warning.
const BIPARTITE_WARN_T: u32 = 8;

fn warn_if_periodic(dec: &SpectralDecomposition, t: u32) {
    if t >= BIPARTITE_WARN_T && dec.eigenvalues().iter().any(|l| (l + 1.0).abs() < 1e-9) {
        log::warn!("eigenvalue -1 present: the walk is periodic and λ^{t} does not decay");
    }
}

fn check_vertex(dec: &SpectralDecomposition, x: usize) -> Result<()> {
    if x >= dec.n() {
        Err(Error::InvalidVertex(x))
    } else {
        Ok(())
    }
}

/// `n × k` matrix with rows `(λ_1^t φ_1(x), …, λ_k^t φ_k(x))`.
pub fn diffusion_coords(dec: &SpectralDecomposition, t: u32, k: usize) -> Result<DMatrix<f64>> {
    if k > dec.len() {
        return Err(Error::Invalid(format!("asked for {k} coordinates, decomposition holds {}", dec.len())));
    }
    warn_if_periodic(dec, t);
    let scale: Vec<f64> = dec.eigenvalues()[..k].iter().map(|l| l.powi(t as i32)).collect();
    Ok(DMatrix::from_fn(dec.n(), k, |x, j| scale[j] * dec.phi()[(x, j)]))
}

/// `D_t(x, x')` over every pair held by `dec`.
pub fn diffusion_distance(dec: &SpectralDecomposition, x: usize, y: usize, t: u32) -> Result<f64> {
    check_vertex(dec, x)?;
    check_vertex(dec, y)?;
    warn_if_periodic(dec, t);
    let mut s = 0.0;
    for (j, l) in dec.eigenvalues().iter().enumerate() {
        let diff = dec.phi()[(x, j)] - dec.phi()[(y, j)];
        s += l.powi(2 * t as i32) * diff * diff;
    }
    Ok(s.sqrt())
}

/// `K_t(x, y) = 1 + Σ_k λ_k^t φ_k(x) φ_k(y)`. With the full block-pulse
/// spectrum on empirical measures this is `T^t(x, y) / p(y)`.
pub fn diffusion_kernel(dec: &SpectralDecomposition, t: u32) -> DMatrix<f64> {
    let n = dec.n();
    warn_if_periodic(dec, t);
    let coords = DMatrix::from_fn(n, dec.len(), |x, j| dec.eigenvalues()[j].powi(t as i32) * dec.phi()[(x, j)]);
    let mut k = &coords * dec.phi().transpose();
    k.add_scalar_mut(1.0);
    k
}
