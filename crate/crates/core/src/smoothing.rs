//! Additive (add-τ), data-driven Stein and Good–Turing estimators for the
//! vertex and edge probability measures, plus the smoothed random-walk
//! transition matrices they induce.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pmf::{Estimator, NetworkEstimator, NetworkPmf, VertexPmf};

/// Used when the data-driven τ is undefined.
pub const STEIN_FALLBACK_TAU: f64 = 0.5;

/// How the flattening constant τ is chosen. Named policies resolve lazily
/// against the graph they are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "policy", content = "tau", rename_all = "kebab-case")]
pub enum TauPolicy {
    Fixed(f64),
    /// τ = 1.
    Laplace,
    /// τ = 1/2.
    KrichevskyTrofimov,
    /// τ = 1/n.
    Perks,
    /// τ = √N / n.
    Minimax,
    /// τ̂ = (N² − Σd²) / (nΣd² − N²), falling back to 1/2.
    SteinDataDriven,
}

impl TauPolicy {
    pub fn resolve(&self, g: &Graph) -> Result<f64> {
        let n = g.n() as f64;
        let tau = match *self {
            TauPolicy::Fixed(t) => t,
            TauPolicy::Laplace => 1.0,
            TauPolicy::KrichevskyTrofimov => 0.5,
            TauPolicy::Perks => 1.0 / n,
            TauPolicy::Minimax => g.total_mass().sqrt() / n,
            TauPolicy::SteinDataDriven => match stein_tau(g) {
                Ok(t) => t,
                Err(Error::DegenerateTau { denominator }) => {
                    log::warn!(
                        "data-driven tau undefined (denominator {denominator}); using {STEIN_FALLBACK_TAU}"
                    );
                    STEIN_FALLBACK_TAU
                }
                Err(e) => return Err(e),
            },
        };
        check_tau(tau)?;
        Ok(tau)
    }
}

impl fmt::Display for TauPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauPolicy::Fixed(t) => write!(f, "{t}"),
            TauPolicy::Laplace => f.write_str("laplace"),
            TauPolicy::KrichevskyTrofimov => f.write_str("kt"),
            TauPolicy::Perks => f.write_str("perks"),
            TauPolicy::Minimax => f.write_str("minimax"),
            TauPolicy::SteinDataDriven => f.write_str("stein"),
        }
    }
}

impl FromStr for TauPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "laplace" => Ok(TauPolicy::Laplace),
            "kt" | "krichevsky-trofimov" => Ok(TauPolicy::KrichevskyTrofimov),
            "perks" => Ok(TauPolicy::Perks),
            "minimax" | "sqrt" => Ok(TauPolicy::Minimax),
            "stein" => Ok(TauPolicy::SteinDataDriven),
            other => {
                let t: f64 = other
                    .parse()
                    .map_err(|_| Error::Invalid(format!("unknown tau policy {s:?}")))?;
                check_tau(t)?;
                Ok(TauPolicy::Fixed(t))
            }
        }
    }
}

/// Free-function form of [`TauPolicy::resolve`].
pub fn resolve_tau(g: &Graph, policy: TauPolicy) -> Result<f64> {
    policy.resolve(g)
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

/// `(c_j + τ) / (Σc + nτ)` for nonnegative counts.
pub fn additive_smoothing(counts: &[f64], tau: f64) -> Result<Vec<f64>> {
    check_tau(tau)?;
    let total: f64 = counts.iter().sum();
    let denom = total + counts.len() as f64 * tau;
    if !(denom > 0.0) {
        return Err(Error::Invalid("all counts are zero and tau is 0".into()));
    }
    Ok(counts.iter().map(|c| (c + tau) / denom).collect())
}

/// Add-τ vertex PMF `p̂_τ(j) = (d_j + τ) / (N + nτ)`. With τ = 0 the result
/// is bitwise the MLE.
pub fn smooth_vertex_pmf(g: &Graph, policy: TauPolicy) -> Result<VertexPmf> {
    let tau = policy.resolve(g)?;
    let probs = additive_smoothing(g.degrees(), tau)?;
    VertexPmf::new(probs, vertex_tag(policy, tau))
}

fn vertex_tag(policy: TauPolicy, tau: f64) -> Estimator {
    if tau == 0.0 {
        Estimator::Mle
    } else if policy == TauPolicy::SteinDataDriven {
        Estimator::Stein { tau }
    } else {
        Estimator::Laplace { tau }
    }
}

/// Data-driven τ from raw counts.
pub fn stein_tau_from_counts(counts: &[f64]) -> Result<f64> {
    let n = counts.len() as f64;
    let total: f64 = counts.iter().sum();
    let sq: f64 = counts.iter().map(|c| c * c).sum();
    let numerator = total * total - sq;
    let denominator = n * sq - total * total;
    // Regular inputs make both terms vanish up to rounding.
    if denominator <= 1e-12 * total * total {
        return Err(Error::DegenerateTau { denominator });
    }
    Ok(numerator / denominator)
}

/// `τ̂ = (N² − Σd²) / (nΣd² − N²)` for the degree vector of `g`.
pub fn stein_tau(g: &Graph) -> Result<f64> {
    stein_tau_from_counts(g.degrees())
}

/// Good–Turing vertex PMF together with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodTuring {
    pub pmf: VertexPmf,
    /// Sum of the per-vertex values before renormalization.
    pub raw_total: f64,
    /// Vertices whose degree-plus-one class was empty; they keep MLE mass.
    pub fallback: Vec<usize>,
}

/// `p̂(i) = (ϖ_{d_i+1} / ϖ_{d_i}) (d_i + 1) / N` where `ϖ_k` counts the
/// vertices of degree `k`, renormalized to sum to one.
pub fn good_turing_pmf(g: &Graph) -> Result<GoodTuring> {
    for (i, &d) in g.degrees().iter().enumerate() {
        if (d - d.round()).abs() > 1e-9 {
            return Err(Error::NonIntegerDegree { vertex: g.label(i).to_string(), degree: d });
        }
    }
    let total = g.total_mass();
    if !(total > 0.0) {
        return Err(Error::Invalid("graph has zero total edge mass".into()));
    }
    let degrees: Vec<u64> = g.degrees().iter().map(|d| d.round() as u64).collect();
    let mut freq: std::collections::HashMap<u64, f64> = std::collections::HashMap::new();
    for &d in &degrees {
        *freq.entry(d).or_insert(0.0) += 1.0;
    }
    let mut fallback = Vec::new();
    let raw: Vec<f64> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let next = freq.get(&(d + 1)).copied().unwrap_or(0.0);
            if next == 0.0 {
                fallback.push(i);
                d as f64 / total
            } else {
                next / freq[&d] * (d as f64 + 1.0) / total
            }
        })
        .collect();
    let raw_total: f64 = raw.iter().sum();
    let pmf = VertexPmf::new(raw.iter().map(|r| r / raw_total).collect(), Estimator::GoodTuring)?;
    Ok(GoodTuring { pmf, raw_total, fallback })
}

/// Smoothed joint PMF `(A + (τ/n) 11ᵀ) / (N + nτ)`.
pub fn smooth_network_pmf(g: &Graph, policy: TauPolicy) -> Result<NetworkPmf> {
    let tau = policy.resolve(g)?;
    let n = g.n();
    let denom = g.total_mass() + n as f64 * tau;
    if !(denom > 0.0) {
        return Err(Error::Invalid("graph has zero total edge mass".into()));
    }
    let shift = tau / n as f64;
    let mut m = g.adjacency();
    m.iter_mut().for_each(|v| *v = (*v + shift) / denom);
    let tag = if tau == 0.0 { NetworkEstimator::Mle } else { NetworkEstimator::Laplace2d { tau } };
    NetworkPmf::new(m, tag)
}

/// Which smoothing is applied to the rows of `D⁻¹A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum TransitionMode {
    /// `(A(i, j) + τ/n) / (d_i + τ)`: row `i` teleports with weight
    /// `τ / (d_i + τ)`.
    Adaptive { tau: f64 },
    /// `(1 − α) D⁻¹A + α/n`: every row teleports with weight `α`.
    Global { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    matrix: DMatrix<f64>,
    mode: TransitionMode,
}

impl TransitionMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn mode(&self) -> TransitionMode {
        self.mode
    }

    /// Teleport weight of row `i`.
    pub fn teleport(&self, g: &Graph, i: usize) -> f64 {
        match self.mode {
            TransitionMode::Adaptive { tau } => tau / (g.degree(i) + tau),
            TransitionMode::Global { alpha } => alpha,
        }
    }
}

pub fn smooth_transition(g: &Graph, mode: TransitionMode) -> Result<TransitionMatrix> {
    let n = g.n();
    let nf = n as f64;
    let matrix = match mode {
        TransitionMode::Adaptive { tau } => {
            check_tau(tau)?;
            if tau == 0.0 {
                g.require_no_isolated()?;
            }
            let mut t = DMatrix::from_element(n, n, tau / nf);
            for i in 0..n {
                for &(j, w) in g.neighbors(i) {
                    t[(i, j)] += w;
                }
                let denom = g.degree(i) + tau;
                t.row_mut(i).iter_mut().for_each(|v| *v /= denom);
            }
            t
        }
        TransitionMode::Global { alpha } => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidAlpha(alpha));
            }
            if let Some(&i) = g.isolated_vertices().first() {
                return Err(Error::Invalid(format!(
                    "vertex {} is isolated, so D^-1 A is undefined; use the degree-adaptive mode with tau > 0",
                    g.label(i)
                )));
            }
            let mut t = DMatrix::from_element(n, n, alpha / nf);
            for i in 0..n {
                let scale = (1.0 - alpha) / g.degree(i);
                for &(j, w) in g.neighbors(i) {
                    t[(i, j)] += scale * w;
                }
            }
            t
        }
    };
    Ok(TransitionMatrix { matrix, mode })
}

/// Left fixed point `π = π T` by power iteration from the uniform vector.
/// For the global mode this is the PageRank vector.
pub fn stationary_distribution(t: &TransitionMatrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let m = t.matrix();
    let n = m.nrows();
    let mut pi = nalgebra::DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..max_iter {
        let mut next = m.tr_mul(&pi);
        let s = next.sum();
        next /= s;
        let delta = (&next - &pi).abs().max();
        pi = next;
        if delta < tol {
            return Ok(pi.iter().copied().collect());
        }
    }
    Err(Error::Numerical(format!(
        "power iteration did not reach tolerance {tol} in {max_iter} steps (periodic chain?)"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{complete, random_weighted, toy};
    use crate::generators::{cycle, star};
    use crate::pmf::{network_pmf_mle, vertex_pmf_mle};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn tau_table() {
        let g = toy();
        assert_eq!(TauPolicy::Laplace.resolve(&g).unwrap(), 1.0);
        assert_eq!(TauPolicy::KrichevskyTrofimov.resolve(&g).unwrap(), 0.5);
        assert_eq!(TauPolicy::Perks.resolve(&g).unwrap(), 0.25);
        assert_eq!(TauPolicy::Minimax.resolve(&g).unwrap(), 22f64.sqrt() / 4.0);
        assert!(matches!(TauPolicy::Fixed(-1.0).resolve(&g), Err(Error::NegativeTau(_))));
        assert_eq!("kt".parse::<TauPolicy>().unwrap(), TauPolicy::KrichevskyTrofimov);
        assert_eq!("0.28".parse::<TauPolicy>().unwrap(), TauPolicy::Fixed(0.28));
        assert!("-2".parse::<TauPolicy>().is_err());
        assert!("bogus".parse::<TauPolicy>().is_err());
    }

    #[test]
    fn toy_laplace_smoothing() {
        let p = smooth_vertex_pmf(&toy(), TauPolicy::Laplace).unwrap();
        let want = [3.0 / 26.0, 9.0 / 26.0, 7.0 / 26.0, 7.0 / 26.0];
        for (a, b) in p.probs().iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_eq!(p.estimator(), Estimator::Laplace { tau: 1.0 });
    }

    #[test]
    fn zero_tau_is_mle_bitwise() {
        for seed in 0..20 {
            let g = random_weighted(15, 0.3, seed);
            if !g.isolated_vertices().is_empty() {
                continue;
            }
            assert_eq!(smooth_vertex_pmf(&g, TauPolicy::Fixed(0.0)).unwrap(), vertex_pmf_mle(&g).unwrap());
            assert_eq!(smooth_network_pmf(&g, TauPolicy::Fixed(0.0)).unwrap(), network_pmf_mle(&g).unwrap());
        }
    }

    #[test]
    fn huge_tau_is_uniform() {
        let p = smooth_vertex_pmf(&toy(), TauPolicy::Fixed(1e9)).unwrap();
        assert!(p.probs().iter().all(|x| (x - 0.25).abs() < 1e-6));
    }

    #[test]
    fn isolated_vertices_get_positive_mass() {
        let g = Graph::from_indexed(vec!["a".into(), "b".into(), "c".into()], &[(0, 1, 1.0)]).unwrap();
        let p = smooth_vertex_pmf(&g, TauPolicy::KrichevskyTrofimov).unwrap();
        assert!(p.probs().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn stein_examples() {
        assert_abs_diff_eq!(stein_tau(&toy()).unwrap(), 344.0 / 76.0, epsilon = 1e-12);
        assert_abs_diff_eq!(stein_tau(&star(3)).unwrap(), 2.0, epsilon = 1e-12);
        assert!(matches!(stein_tau(&complete(5)), Err(Error::DegenerateTau { .. })));
        assert!(matches!(stein_tau(&cycle(7)), Err(Error::DegenerateTau { .. })));
        assert_eq!(TauPolicy::SteinDataDriven.resolve(&cycle(7)).unwrap(), STEIN_FALLBACK_TAU);
        let p = smooth_vertex_pmf(&star(3), TauPolicy::SteinDataDriven).unwrap();
        assert_eq!(p.estimator(), Estimator::Stein { tau: p.estimator().tau().unwrap() });
    }

    #[test]
    fn good_turing_small_table() {
        // Degrees (1, 1, 2), N = 4.
        let g = crate::graph::load_graph([("1", "2", 1.0), ("3", "3", 2.0)]).unwrap();
        assert_eq!(g.degrees(), &[1.0, 1.0, 2.0]);
        let gt = good_turing_pmf(&g).unwrap();
        // ϖ₂/ϖ₁ · 2/4 = 1/4 for each degree-1 vertex; vertex 3 keeps 2/4.
        assert_eq!(gt.fallback, vec![2]);
        assert_abs_diff_eq!(gt.raw_total, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gt.pmf.probs()[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(gt.pmf.probs()[2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn good_turing_toy_and_regular() {
        let gt = good_turing_pmf(&toy()).unwrap();
        // ϖ = {2: 1, 6: 2, 8: 1}; no class above any degree is populated.
        assert_eq!(gt.fallback, vec![0, 1, 2, 3]);
        let mle = vertex_pmf_mle(&toy()).unwrap();
        for (a, b) in gt.pmf.probs().iter().zip(mle.probs()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let reg = good_turing_pmf(&cycle(6)).unwrap();
        for a in reg.pmf.probs() {
            assert_abs_diff_eq!(*a, 1.0 / 6.0, epsilon = 1e-15);
        }
        let frac = crate::graph::load_graph([("1", "2", 0.5), ("2", "3", 1.0)]).unwrap();
        assert!(matches!(good_turing_pmf(&frac), Err(Error::NonIntegerDegree { .. })));
    }

    #[test]
    fn toy_network_smoothing() {
        let pj = smooth_network_pmf(&toy(), TauPolicy::Laplace).unwrap();
        assert_abs_diff_eq!(pj.matrix()[(0, 0)], 1.0 / 104.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pj.matrix()[(0, 1)], 9.0 / 104.0, epsilon = 1e-15);
    }

    #[test]
    fn transitions() {
        let g = toy();
        let t = smooth_transition(&g, TransitionMode::Adaptive { tau: 1.0 }).unwrap();
        assert_abs_diff_eq!(t.matrix()[(0, 1)], 0.75, epsilon = 1e-15);
        for j in [0, 2, 3] {
            assert_abs_diff_eq!(t.matrix()[(0, j)], 0.25 / 3.0, epsilon = 1e-15);
        }
        let t0 = smooth_transition(&g, TransitionMode::Global { alpha: 0.0 }).unwrap();
        let a = g.adjacency();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(t0.matrix()[(i, j)], a[(i, j)] / g.degree(i));
            }
        }
        let t1 = smooth_transition(&g, TransitionMode::Global { alpha: 1.0 }).unwrap();
        assert!(t1.matrix().iter().all(|&v| v == 0.25));
        assert!(matches!(
            smooth_transition(&g, TransitionMode::Global { alpha: 1.5 }),
            Err(Error::InvalidAlpha(_))
        ));
    }

    #[test]
    fn dangling_vertices_need_adaptive_mode() {
        let g = Graph::from_indexed(vec!["a".into(), "b".into(), "c".into()], &[(0, 1, 1.0)]).unwrap();
        assert!(smooth_transition(&g, TransitionMode::Global { alpha: 0.15 }).is_err());
        let t = smooth_transition(&g, TransitionMode::Adaptive { tau: 0.5 }).unwrap();
        for j in 0..3 {
            assert_abs_diff_eq!(t.matrix()[(2, j)], 1.0 / 3.0, epsilon = 1e-15);
        }
        assert!(smooth_transition(&g, TransitionMode::Adaptive { tau: 0.0 }).is_err());
    }

    #[test]
    fn adaptive_chain_is_stationary_at_smoothed_pmf() {
        let g = random_weighted(20, 0.2, 7);
        let t = smooth_transition(&g, TransitionMode::Adaptive { tau: 0.7 }).unwrap();
        let pi = stationary_distribution(&t, 1e-14, 10_000).unwrap();
        let p = smooth_vertex_pmf(&g, TauPolicy::Fixed(0.7)).unwrap();
        for (a, b) in pi.iter().zip(p.probs()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
        }
    }

    #[test]
    fn power_iteration_reports_periodic_chain() {
        let g = crate::generators::path(2);
        let t = smooth_transition(&g, TransitionMode::Global { alpha: 0.0 }).unwrap();
        // Uniform start is already stationary for K2.
        assert!(stationary_distribution(&t, 1e-12, 10).is_ok());
        let g = crate::generators::path(3);
        let t = smooth_transition(&g, TransitionMode::Global { alpha: 0.0 }).unwrap();
        assert!(stationary_distribution(&t, 1e-12, 50).is_err());
    }

    proptest! {
        #[test]
        fn estimators_are_normalized(seed in 0u64..500, n in 2usize..25, tau in 0.0f64..5.0) {
            let g = random_weighted(n, 0.3, seed);
            let p = smooth_vertex_pmf(&g, TauPolicy::Fixed(tau + 1e-3)).unwrap();
            prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let pj = smooth_network_pmf(&g, TauPolicy::Fixed(tau + 1e-3)).unwrap();
            prop_assert!((pj.matrix().sum() - 1.0).abs() <= 1e-12);
            for (row, want) in pj.marginal().iter().zip(p.probs()) {
                prop_assert!((row - want).abs() <= 1e-12);
            }
        }

        #[test]
        fn shrinkage_is_monotone(seed in 0u64..500, t1 in 0.0f64..10.0, dt in 0.0f64..10.0) {
            let g = random_weighted(15, 0.3, seed);
            let n = g.n() as f64;
            let dev = |t: f64| {
                smooth_vertex_pmf(&g, TauPolicy::Fixed(t)).unwrap().probs().iter()
                    .map(|p| (p - 1.0 / n).abs()).fold(0.0, f64::max)
            };
            prop_assert!(dev(t1 + dt) <= dev(t1) + 1e-15);
        }

        #[test]
        fn transition_rows_stochastic(seed in 0u64..500, tau in 0.01f64..5.0, alpha in 0.0f64..=1.0) {
            let g = random_weighted(15, 0.2, seed);
            let t = smooth_transition(&g, TransitionMode::Adaptive { tau }).unwrap();
            for row in t.matrix().row_iter() {
                prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
                prop_assert!(row.iter().all(|&v| v >= 0.0));
            }
            if g.isolated_vertices().is_empty() {
                let t = smooth_transition(&g, TransitionMode::Global { alpha }).unwrap();
                for row in t.matrix().row_iter() {
                    prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
                    prop_assert!(row.iter().all(|&v| v >= 0.0));
                }
            }
        }
    }
}
