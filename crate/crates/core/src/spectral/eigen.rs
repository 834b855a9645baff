//! Symmetric eigensolvers: a dense path and a Lanczos path with full
//! reorthogonalization for large matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Fixed so that the iterative path is reproducible.
const LANCZOS_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Eigenpairs in solver order; `vectors` holds one column per value.
#[derive(Debug, Clone)]
pub(crate) struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub(crate) fn dense(c: &DMatrix<f64>) -> EigenPairs {
    let eig = SymmetricEigen::new(c.clone());
    EigenPairs { values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    let norm = v.norm();
    v / norm
}

fn orthogonalize(w: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let h = q.dot(w);
            w.axpy(-h, q, 1.0);
        }
    }
}

/// The `want` eigenpairs of largest magnitude. Stops once every wanted Ritz
/// pair has residual `≤ tol · ‖C‖_F`, growing the Krylov space by doubling.
pub(crate) fn lanczos(c: &DMatrix<f64>, want: usize, tol: f64) -> Result<EigenPairs> {
    let n = c.nrows();
    let want = want.min(n);
    let scale = c.norm().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut q: Vec<DVector<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut v = random_unit(&mut rng, n);
    let mut target = (2 * want + 20).min(n);

    loop {
        while q.len() < target {
            let mut w = c * &v;
            alpha.push(v.dot(&w));
            q.push(v.clone());
            orthogonalize(&mut w, &q);
            if q.len() == n {
                break;
            }
            let b = w.norm();
            if b <= 1e-12 * scale {
                // Invariant subspace found; continue in a fresh direction.
                let mut r = random_unit(&mut rng, n);
                orthogonalize(&mut r, &q);
                let norm = r.norm();
                beta.push(0.0);
                v = r / norm;
            } else {
                beta.push(b);
                v = w / b;
            }
        }

        let k = q.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if j == i + 1 {
                beta[i]
            } else if i == j + 1 {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].abs().total_cmp(&eig.eigenvalues[a].abs()));
        let take = want.min(k);
        let tail = if k == n { 0.0 } else { beta[k - 1] };
        let converged =
            order[..take].iter().all(|&i| (tail * eig.eigenvectors[(k - 1, i)]).abs() <= tol * scale);
        if converged || k == n {
            let basis = DMatrix::from_columns(&q);
            let values: Vec<f64> = order[..take].iter().map(|&i| eig.eigenvalues[i]).collect();
            let mut vectors = DMatrix::zeros(n, take);
            for (col, &i) in order[..take].iter().enumerate() {
                let mut y = &basis * eig.eigenvectors.column(i);
                y /= y.norm();
                vectors.set_column(col, &y);
            }
            for (col, &lam) in values.iter().enumerate() {
                let y = vectors.column(col);
                let r = (c * y - y * lam).norm();
                if r > 1e2 * tol * scale {
                    return Err(Error::Numerical(format!(
                        "Lanczos residual {r:e} exceeds tolerance for eigenvalue {lam}"
                    )));
                }
            }
            return Ok(EigenPairs { values, vectors });
        }
        target = (2 * k).min(n);
    }
}
