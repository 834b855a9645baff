//! Lloyd's k-means with k-means++ seeding and seeded restarts.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions { restarts: 50, max_iter: 100, seed: 20240601 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Cluster ids in `1..=k`, numbered by first appearance along the rows.
    pub labels: Vec<usize>,
    pub centers: DMatrix<f64>,
    pub wcss: f64,
    /// Restart that produced the result.
    pub best_restart: usize,
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centers: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols()).map(|d| (points[(i, d)] - centers[(c, d)]).powi(2)).sum()
}

fn seed_centers(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let n = points.nrows();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut best = vec![f64::INFINITY; n];
    while chosen.len() < k {
        let last = *chosen.last().unwrap();
        for i in 0..n {
            let d: f64 = (0..points.ncols()).map(|c| (points[(i, c)] - points[(last, c)]).powi(2)).sum();
            best[i] = best[i].min(d);
        }
        let total: f64 = best.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in best.iter().enumerate() {
                if w > 0.0 && target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            if best[pick] == 0.0 {
                pick = best.iter().rposition(|&w| w > 0.0).unwrap_or(pick);
            }
            pick
        } else {
            // Every point coincides with a center: take the first unused row.
            (0..n).find(|i| !chosen.contains(i)).unwrap_or(0)
        };
        chosen.push(next);
    }
    DMatrix::from_fn(k, points.ncols(), |c, d| points[(chosen[c], d)])
}

fn lloyd(points: &DMatrix<f64>, mut centers: DMatrix<f64>, max_iter: usize) -> (Vec<usize>, DMatrix<f64>, f64) {
    let (n, dim) = points.shape();
    let k = centers.nrows();
    let mut assign = vec![usize::MAX; n];
    for _ in 0..max_iter {
        let mut changed = false;
        for i in 0..n {
            let mut best = (f64::INFINITY, 0);
            for c in 0..k {
                let d = sq_dist(points, i, &centers, c);
                if d < best.0 {
                    best = (d, c);
                }
            }
            if assign[i] != best.1 {
                assign[i] = best.1;
                changed = true;
            }
        }
        let mut sums = DMatrix::<f64>::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[assign[i]] += 1;
            for d in 0..dim {
                sums[(assign[i], d)] += points[(i, d)];
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Re-seed an empty cluster at the point worst served.
                let far = (0..n)
                    .map(|i| (sq_dist(points, i, &centers, assign[i]), i))
                    .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a })
                    .1;
                for d in 0..dim {
                    centers[(c, d)] = points[(far, d)];
                }
                assign[far] = c;
                changed = true;
            } else {
                for d in 0..dim {
                    centers[(c, d)] = sums[(c, d)] / counts[c] as f64;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let wcss = (0..n).map(|i| sq_dist(points, i, &centers, assign[i])).sum();
    (assign, centers, wcss)
}

/// Renumbers ids by first appearance and returns them 1-based.
fn canonical(assign: &[usize], centers: &DMatrix<f64>) -> (Vec<usize>, DMatrix<f64>) {
    let k = centers.nrows();
    let mut map = vec![usize::MAX; k];
    let mut next = 0;
    for &a in assign {
        if map[a] == usize::MAX {
            map[a] = next;
            next += 1;
        }
    }
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = next;
            next += 1;
        }
    }
    let mut reordered = DMatrix::zeros(k, centers.ncols());
    for c in 0..k {
        reordered.set_row(map[c], &centers.row(c));
    }
    (assign.iter().map(|&a| map[a] + 1).collect(), reordered)
}

/// Clusters the rows of `points`. Restart `r` draws from a generator seeded
/// with `seed + r`; the lowest WCSS wins and ties keep the earlier restart.
pub fn kmeans(points: &DMatrix<f64>, k: usize, opts: &KMeansOptions) -> Result<KMeansResult> {
    let n = points.nrows();
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("k = {k} must lie in 1..={n}")));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("k-means input".into()));
    }
    if k == n {
        let labels = (1..=n).collect();
        return Ok(KMeansResult { labels, centers: points.clone(), wcss: 0.0, best_restart: 0 });
    }
    let restarts = opts.restarts.max(1);
    let mut best: Option<(f64, usize, Vec<usize>, DMatrix<f64>)> = None;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
        let init = seed_centers(points, k, &mut rng);
        let (assign, centers, wcss) = lloyd(points, init, opts.max_iter.max(1));
        if best.as_ref().is_none_or(|b| wcss < b.0) {
            best = Some((wcss, r, assign, centers));
        }
    }
    let (wcss, best_restart, assign, centers) = best.expect("at least one restart");
    let (labels, centers) = canonical(&assign, &centers);
    Ok(KMeansResult { labels, centers, wcss, best_restart })
}
