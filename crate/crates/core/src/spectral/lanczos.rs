//! Lanczos with full reorthogonalization, locking and explicit restarts.
//!
//! Each run builds a Krylov basis orthogonal to the locked eigenvectors and
//! locks the Ritz pairs that have converged, bottom-up. A Krylov space holds
//! one vector per eigenspace, so repeated eigenvalues are picked up copy by
//! copy in later restarts. After `count` values are locked, further runs
//! continue until the deflated operator has nothing below the largest
//! accepted value.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::LinearOperator;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Residual tolerance relative to the operator norm estimate.
    pub tol: f64,
    pub krylov_dim: usize,
    pub max_runs: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: 1e-10, krylov_dim: 40, max_runs: 10_000, seed: 42 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize(w: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for v in against {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

struct Run {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    residuals: Vec<f64>,
}

fn lanczos_run(op: &impl LinearOperator, locked: &[Vec<f64>], m: usize, rng: &mut ChaCha8Rng, scale: f64) -> Option<Run> {
    let n = op.dim();
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut q, locked);
    let norm = dot(&q, &q).sqrt();
    if norm < 1e-300 {
        return None;
    }
    q.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alphas = Vec::with_capacity(m);
    let mut betas: Vec<f64> = Vec::with_capacity(m);
    let mut w = vec![0.0; n];
    let mut last_beta = 0.0;
    for j in 0..m {
        op.apply(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(-alpha, &basis[j], &mut w);
        if j > 0 {
            axpy(-betas[j - 1], &basis[j - 1], &mut w);
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let beta = dot(&w, &w).sqrt();
        if beta <= 1e-12 * scale || j + 1 == m {
            last_beta = if beta <= 1e-12 * scale { 0.0 } else { beta };
            break;
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    }

    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut run = Run { values: Vec::new(), vectors: Vec::new(), residuals: Vec::new() };
    for i in idx {
        let s = eig.eigenvectors.column(i);
        let mut y = vec![0.0; n];
        for (c, qv) in s.iter().zip(&basis) {
            axpy(*c, qv, &mut y);
        }
        let ny = dot(&y, &y).sqrt();
        y.iter_mut().for_each(|x| *x /= ny);
        run.values.push(eig.eigenvalues[i]);
        run.residuals.push((last_beta * s[k - 1]).abs());
        run.vectors.push(y);
    }
    Some(run)
}

/// The `count` smallest eigenvalues of a symmetric operator, ascending.
pub fn smallest_eigenvalues(op: &impl LinearOperator, count: usize, opts: &LanczosOptions) -> Result<Vec<f64>> {
    let n = op.dim();
    if count > n {
        return Err(Error::LengthMismatch { left: count, right: n });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked_vecs: Vec<Vec<f64>> = Vec::new();
    let mut locked_vals: Vec<f64> = Vec::new();
    let mut scale: f64 = 1.0;
    let mut m = opts.krylov_dim.max(2 * count.min(64) + 10);
    let mut runs = 0;

    loop {
        let avail = n - locked_vecs.len();
        if avail == 0 {
            break;
        }
        runs += 1;
        if runs > opts.max_runs {
            return Err(Error::ConvergenceFailure(format!("{runs} Lanczos runs, {} of {count} values locked", locked_vals.len())));
        }
        let m_eff = m.min(avail);
        let Some(run) = lanczos_run(op, &locked_vecs, m_eff, &mut rng, scale) else {
            break;
        };
        scale = run.values.iter().fold(scale, |acc, v| acc.max(v.abs()));

        let enough = locked_vals.len() >= count;
        let kth = if enough {
            let mut sorted = locked_vals.clone();
            sorted.sort_by(f64::total_cmp);
            Some(sorted[count - 1])
        } else {
            None
        };

        let mut newly = 0;
        for ((val, vec), res) in run.values.iter().zip(run.vectors).zip(&run.residuals) {
            if *res > opts.tol * scale {
                break;
            }
            if let Some(kth) = kth {
                // verification phase: only values below the current k-th matter
                if *val >= kth - opts.tol * scale {
                    break;
                }
            }
            locked_vals.push(*val);
            locked_vecs.push(vec);
            newly += 1;
        }

        if let Some(kth) = kth {
            let bottom = run.values[0];
            let bottom_converged = run.residuals[0] <= opts.tol * scale;
            if newly == 0 && (bottom_converged || m_eff == avail) && bottom >= kth - opts.tol * scale {
                break;
            }
        }
        if newly == 0 {
            if m_eff == avail {
                return Err(Error::ConvergenceFailure("Krylov space exhausted without a converged Ritz value".into()));
            }
            m = (2 * m).min(avail);
        }
    }

    locked_vals.sort_by(f64::total_cmp);
    if locked_vals.len() < count {
        return Err(Error::ConvergenceFailure(format!("only {} of {count} eigenvalues found", locked_vals.len())));
    }
    locked_vals.truncate(count);
    Ok(locked_vals)
}
