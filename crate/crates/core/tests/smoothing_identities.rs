use approx::assert_abs_diff_eq;
use grafield::generators::{random_weighted, star, weighted_quartet};
use grafield::smoothing::{additive_smoothing, stein_tau_from_counts};
use grafield::{smooth_network_pmf, smooth_vertex_pmf, stein_tau, vertex_pmf_mle, TauPolicy};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn zero_tau_is_bitwise_mle() {
    for seed in 0..20 {
        let g = random_weighted(12, 0.4, seed);
        if !g.isolated_vertices().is_empty() {
            continue;
        }
        let smoothed = smooth_vertex_pmf(&g, TauPolicy::Fixed(0.0)).unwrap();
        let mle = vertex_pmf_mle(&g).unwrap();
        let same = smoothed.probs().iter().zip(mle.probs()).all(|(a, b)| a.to_bits() == b.to_bits());
        assert!(same);
    }
}

#[test]
fn network_rows_sum_to_vertex_pmf() {
    for seed in 0..20 {
        let g = random_weighted(3 + seed as usize, 0.3, 40 + seed);
        for policy in [TauPolicy::Fixed(0.0), TauPolicy::Fixed(0.5), TauPolicy::Laplace, TauPolicy::Minimax] {
            let joint = smooth_network_pmf(&g, policy).unwrap();
            let vertex = smooth_vertex_pmf(&g, policy).unwrap();
            for (row, p) in joint.marginal().iter().zip(vertex.probs()) {
                assert_abs_diff_eq!(row, p, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn stein_tau_reference_values() {
    // Degrees (2, 8, 6, 6): (22² − 140) / (4·140 − 22²).
    assert_abs_diff_eq!(stein_tau(&weighted_quartet()).unwrap(), 344.0 / 76.0, epsilon = 1e-12);
    // Degrees (3, 1, 1, 1): (36 − 12) / (48 − 36).
    assert_abs_diff_eq!(stein_tau(&star(3)).unwrap(), 2.0, epsilon = 1e-12);
}

/// Mean squared error of the MLE and of the add-τ̂ estimator over draws of
/// `draws` samples from a Zipf(1) law on `cells` cells.
pub fn stein_risk(cells: usize, draws: usize, reps: usize, seed: u64) -> (f64, f64) {
    let h: f64 = (1..=cells).map(|k| 1.0 / k as f64).sum();
    let truth: Vec<f64> = (1..=cells).map(|k| 1.0 / (k as f64 * h)).collect();
    let sampler = WeightedIndex::new(&truth).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mle_err, mut stein_err) = (0.0, 0.0);
    for _ in 0..reps {
        let mut counts = vec![0.0; cells];
        for _ in 0..draws {
            counts[sampler.sample(&mut rng)] += 1.0;
        }
        let tau = stein_tau_from_counts(&counts).unwrap();
        let mle = additive_smoothing(&counts, 0.0).unwrap();
        let stein = additive_smoothing(&counts, tau).unwrap();
        for j in 0..cells {
            mle_err += (mle[j] - truth[j]).powi(2);
            stein_err += (stein[j] - truth[j]).powi(2);
        }
    }
    (mle_err / reps as f64, stein_err / reps as f64)
}

#[test]
fn data_driven_tau_lowers_mean_risk() {
    let (mle, stein) = stein_risk(200, 300, 200, 20240601);
    assert!(stein < mle, "stein {stein} vs mle {mle}");
}
