//! Dense exponentials, spectra, and a Lanczos ground-state solver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::sparse::SparseOperator;
use crate::error::{require, Error, Result};

/// `exp(G)` by Pade scaling and squaring on the dense matrix.
pub fn expm(generator: &SparseOperator) -> SparseOperator {
    if generator.nnz() == 0 {
        return SparseOperator::identity(generator.dim());
    }
    SparseOperator::from_dense(&generator.to_dense().exp())
}

/// Sorted eigenvalues of a symmetric operator.
pub fn eigenvalues(h: &SparseOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(h.to_dense()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `W^T H W`.
pub fn conjugate(h: &SparseOperator, w: &SparseOperator) -> SparseOperator {
    let mut out = w.transpose().matmul(&h.matmul(w));
    out.hermitian = h.hermitian && out.asymmetry() < 1e-10 * h.max_abs().max(1.0);
    out
}

/// Largest singular value of the columns `cols` of `a`.
pub fn restricted_norm(a: &SparseOperator, cols: &[usize]) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    let dense = a.to_dense();
    let sub = dense.select_columns(cols);
    sub.singular_values().iter().fold(0.0, |m, s| m.max(*s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    pub tol: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Random start vector from this seed instead of the normalised all-ones vector.
    pub seed: Option<u64>,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-9, krylov_dim: 120, max_restarts: 200, seed: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundState {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Lowest eigenpair of a symmetric operator by restarted Lanczos with full
/// reorthogonalisation.
pub fn ground_state(h: &SparseOperator, opts: LanczosOptions) -> Result<GroundState> {
    let dim = h.dim();
    require(dim > 0, || "empty operator".into())?;
    require(opts.tol > 0.0, || "tolerance must be positive".into())?;
    require(h.asymmetry() <= 1e-10 * h.max_abs().max(1.0), || "ground_state needs a symmetric operator".into())?;
    let mut start: Vec<f64> = match opts.seed {
        None => vec![1.0; dim],
        Some(seed) => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
        }
    };
    normalize(&mut start);
    let m = opts.krylov_dim.clamp(1, dim);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for j in 0..m {
            let mut w = h.mul_vec(&basis[j]);
            iterations += 1;
            alpha.push(dot(&w, &basis[j]));
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = normalize(&mut w);
            if j + 1 == m || b <= 1e-14 * alpha[j].abs().max(1.0) {
                break;
            }
            beta.push(b);
            basis.push(w);
        }
        let k = alpha.len();
        let mut t = DMatrix::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (idx, &energy) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let y: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
        let mut v = vec![0.0; dim];
        for (c, q) in y.iter().zip(&basis) {
            v.iter_mut().zip(q).for_each(|(x, qi)| *x += c * qi);
        }
        normalize(&mut v);
        let hv = h.mul_vec(&v);
        let e = dot(&v, &hv);
        residual = hv.iter().zip(&v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
        if residual < opts.tol {
            return Ok(GroundState { energy: e, vector: v, residual, iterations });
        }
        let _ = energy;
        start = v;
    }
    Err(Error::NoConvergence { iterations, residual })
}
