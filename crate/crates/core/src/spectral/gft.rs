//! Graph Fourier transform in a KL basis.

use super::decomposition::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::pmf::VertexPmf;

fn check_len(y: &[f64], dec: &SpectralDecomposition) -> Result<()> {
    if y.len() != dec.n() {
        return Err(Error::DimensionMismatch { expected: dec.n(), found: y.len() });
    }
    Ok(())
}

/// `ŷ_k = Σ_x y(x) φ_k(x) p(x)`.
pub fn gft(y: &[f64], dec: &SpectralDecomposition, p: &VertexPmf) -> Result<Vec<f64>> {
    check_len(y, dec)?;
    if p.len() != dec.n() {
        return Err(Error::DimensionMismatch { expected: dec.n(), found: p.len() });
    }
    let w = p.probs();
    Ok((0..dec.len())
        .map(|k| (0..dec.n()).map(|x| y[x] * dec.phi()[(x, k)] * w[x]).sum())
        .collect())
}

/// `ŷ_k = Σ_x y(x) φ_k(x)` without the vertex weights.
pub fn gft_unweighted(y: &[f64], dec: &SpectralDecomposition) -> Result<Vec<f64>> {
    check_len(y, dec)?;
    Ok((0..dec.len()).map(|k| (0..dec.n()).map(|x| y[x] * dec.phi()[(x, k)]).sum()).collect())
}

/// `y(x) = mean + Σ_k ŷ_k φ_k(x)`; exact inverse of [`gft`] on a full
/// spectrum when `mean = Σ y p`.
pub fn inverse_gft(coeffs: &[f64], mean: f64, dec: &SpectralDecomposition) -> Result<Vec<f64>> {
    if coeffs.len() != dec.len() {
        return Err(Error::DimensionMismatch { expected: dec.len(), found: coeffs.len() });
    }
    Ok((0..dec.n())
        .map(|x| mean + coeffs.iter().enumerate().map(|(k, c)| c * dec.phi()[(x, k)]).sum::<f64>())
        .collect())
}
