//! Spectral community detection: k-means on rows of the KL basis, plus
//! evaluation against ground truth.

mod assignment;
mod kmeans;

use nalgebra::DMatrix;
use serde::Serialize;

pub use assignment::min_cost_assignment;
pub use kmeans::{kmeans, KMeansOptions, KMeansResult};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{operator_spectrum, OperatorKind, SpectralDecomposition};

/// Number of eigenfunctions used as coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingDims {
    #[default]
    KMinusOne,
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterOptions {
    pub k: usize,
    pub operator: OperatorKind,
    pub kmeans: KMeansOptions,
    /// Scale each embedded row to unit length before k-means.
    pub row_normalize: bool,
    pub dims: EmbeddingDims,
}

impl ClusterOptions {
    pub fn new(k: usize, operator: OperatorKind) -> Self {
        ClusterOptions {
            k,
            operator,
            kmeans: KMeansOptions::default(),
            row_normalize: false,
            dims: EmbeddingDims::KMinusOne,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterResult {
    /// Cluster id in `1..=k` per vertex.
    pub labels: Vec<usize>,
    pub wcss: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Eigenvalues of the coordinates used.
    pub eigenvalues: Vec<f64>,
}

/// Rows of the leading `dims` eigenfunctions, optionally unit-normalized.
pub fn spectral_embedding(dec: &SpectralDecomposition, dims: usize, row_normalize: bool) -> DMatrix<f64> {
    let mut x = dec.phi().columns(0, dims.min(dec.len())).into_owned();
    if row_normalize {
        for mut row in x.row_iter_mut() {
            let norm = row.norm();
            if norm > 0.0 {
                row /= norm;
            }
        }
    }
    x
}

pub fn spectral_cluster(g: &Graph, opts: &ClusterOptions) -> Result<ClusterResult> {
    let n = g.n();
    let k = opts.k;
    if k < 2 {
        return Err(Error::Invalid(format!("need at least 2 clusters, got {k}")));
    }
    if k > n {
        return Err(Error::Invalid(format!("k = {k} exceeds the {n} vertices")));
    }
    if !opts.operator.is_regularized() {
        let isolated = g.isolated_vertices();
        if !isolated.is_empty() {
            let names: Vec<&str> = isolated.iter().take(10).map(|&i| g.label(i)).collect();
            return Err(Error::Invalid(format!(
                "{} isolated vertices ({}{}) make the unregularized operator undefined; use a regularized operator or the largest component",
                isolated.len(),
                names.join(", "),
                if isolated.len() > 10 { ", ..." } else { "" }
            )));
        }
    }
    let dims = match opts.dims {
        EmbeddingDims::KMinusOne => k - 1,
        EmbeddingDims::K => k,
    }
    .min(n - 1);
    let dec = operator_spectrum(g, opts.operator, dims)?;
    let x = spectral_embedding(&dec, dims, opts.row_normalize);
    let fit = kmeans(&x, k, &opts.kmeans)?;
    Ok(ClusterResult {
        labels: fit.labels,
        wcss: fit.wcss,
        seed: opts.kmeans.seed,
        restarts: opts.kmeans.restarts,
        eigenvalues: dec.eigenvalues().to_vec(),
    })
}

fn encode<T: Eq + std::hash::Hash + Clone>(xs: &[T]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    xs.iter()
        .map(|x| {
            let next = map.len();
            *map.entry(x.clone()).or_insert(next)
        })
        .collect()
}

/// Smallest fraction of disagreements over all matchings between predicted
/// and true classes. Surplus classes on either side count as errors.
pub fn misclassification<A, B>(labels: &[A], truth: &[B]) -> Result<f64>
where
    A: Eq + std::hash::Hash + Clone,
    B: Eq + std::hash::Hash + Clone,
{
    if labels.len() != truth.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), found: labels.len() });
    }
    if labels.is_empty() {
        return Err(Error::Invalid("empty labelling".into()));
    }
    let pred = encode(labels);
    let real = encode(truth);
    let kp = pred.iter().max().unwrap() + 1;
    let kt = real.iter().max().unwrap() + 1;
    let mut confusion = vec![vec![0.0; kt]; kp];
    for (&a, &b) in pred.iter().zip(&real) {
        confusion[a][b] += 1.0;
    }
    let cost: Vec<Vec<f64>> = confusion.iter().map(|row| row.iter().map(|c| -c).collect()).collect();
    let matched: f64 = min_cost_assignment(&cost)
        .iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| confusion[i][j]))
        .sum();
    Ok(1.0 - matched / labels.len() as f64)
}

/// `argmax_j |λ_j − λ_{j+1}| + 1` with `j` 1-based; ties go to the smaller k.
pub fn choose_k_spectral_gap(eigenvalues: &[f64]) -> Result<usize> {
    if eigenvalues.len() < 2 {
        return Err(Error::Invalid("need at least two eigenvalues".into()));
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for j in 0..eigenvalues.len() - 1 {
        let gap = (eigenvalues[j] - eigenvalues[j + 1]).abs();
        if gap > best.0 {
            best = (gap, j);
        }
    }
    Ok(best.1 + 2)
}

/// `1 − λ_1` with `λ_1` the largest nontrivial eigenvalue.
pub fn algebraic_connectivity(dec: &SpectralDecomposition) -> Result<f64> {
    let top = dec
        .eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Invalid("decomposition holds no eigenpairs".into()));
    }
    Ok(1.0 - top)
}
