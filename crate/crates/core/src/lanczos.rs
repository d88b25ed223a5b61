//! Symmetric Lanczos kernels: extremal eigenpairs, the action of the matrix
//! exponential on a vector, and Gauss quadrature for diagonal entries of
//! matrix functions.
//!
//! All routines use full reorthogonalization; the graphs here are small
//! enough (hundreds to a few thousand nodes) that the extra dot products
//! are cheap compared to losing orthogonality.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

/// Which end of the spectrum to converge to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    Largest,
    Smallest,
}

const BASIS_CAP: usize = 400;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Deterministic starting vector: all ones with a mild index-dependent
/// perturbation so it is not orthogonal to lattice eigenvectors.
fn start_vector(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 1.0 + 0.3 * ((i as f64 * 0.7391).sin()))
        .collect()
}

/// Eigendecomposition of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta` (dense fallback; the basis stays small).
fn tridiag_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
}

/// Lanczos iteration with full reorthogonalization and an optional
/// projection applied to every new basis vector (used to deflate known
/// eigenvectors such as the Laplacian kernel).
struct LanczosBasis {
    vectors: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

fn run_lanczos(
    n: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    start: &[f64],
    max_steps: usize,
    project: Option<&dyn Fn(&mut [f64])>,
) -> LanczosBasis {
    let mut v = start.to_vec();
    if let Some(p) = project {
        p(&mut v);
    }
    let nv = norm(&v);
    for x in v.iter_mut() {
        *x /= nv;
    }

    let mut basis = LanczosBasis {
        vectors: vec![v],
        alpha: Vec::new(),
        beta: Vec::new(),
    };
    let mut w = vec![0.0; n];
    for step in 0..max_steps {
        let v = &basis.vectors[step];
        matvec(v, &mut w);
        let a = dot(v, &w);
        basis.alpha.push(a);
        for (wi, vi) in w.iter_mut().zip(v) {
            *wi -= a * vi;
        }
        if step > 0 {
            let b_prev = basis.beta[step - 1];
            for (wi, ui) in w.iter_mut().zip(&basis.vectors[step - 1]) {
                *wi -= b_prev * ui;
            }
        }
        // full reorthogonalization
        for u in &basis.vectors {
            let c = dot(&w, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
        if let Some(p) = project {
            p(&mut w);
        }
        let b = norm(&w);
        if b < 1e-14 {
            break;
        }
        basis.beta.push(b);
        basis.vectors.push(w.iter().map(|x| x / b).collect());
    }
    basis
}

/// Extremal eigenpair of a symmetric operator given by its matvec.
///
/// Converges to residual `‖Av - λv‖ <= tol * max(1, |λ|)`; errors with the
/// residual norm when the iteration cap is reached first.
pub fn extremal_eigenpair(
    n: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    which: Extremal,
    tol: f64,
    max_iter: usize,
    project: Option<&dyn Fn(&mut [f64])>,
) -> Result<(f64, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Param("empty operator".into()));
    }
    let mut start = start_vector(n);
    let mut total_iters = 0usize;
    loop {
        let steps = BASIS_CAP.min(n).min(max_iter.saturating_sub(total_iters).max(1));
        let basis = run_lanczos(n, matvec, &start, steps, project);
        total_iters += basis.alpha.len();
        let (theta, s) = tridiag_eigen(&basis.alpha, &basis.beta);
        let pick = match which {
            Extremal::Largest => (0..theta.len())
                .max_by(|&a, &b| theta[a].total_cmp(&theta[b]))
                .unwrap(),
            Extremal::Smallest => (0..theta.len())
                .min_by(|&a, &b| theta[a].total_cmp(&theta[b]))
                .unwrap(),
        };
        let lambda = theta[pick];
        let mut vec = vec![0.0; n];
        for (j, basis_vec) in basis.vectors.iter().take(theta.len()).enumerate() {
            let c = s[(j, pick)];
            for (vi, bi) in vec.iter_mut().zip(basis_vec) {
                *vi += c * bi;
            }
        }
        let nv = norm(&vec);
        for x in vec.iter_mut() {
            *x /= nv;
        }
        let mut av = vec![0.0; n];
        matvec(&vec, &mut av);
        let residual = vec
            .iter()
            .zip(&av)
            .map(|(v, a)| (a - lambda * v).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol * lambda.abs().max(1.0) {
            return Ok((lambda, vec));
        }
        if total_iters >= max_iter {
            return Err(Error::NoConvergence {
                iterations: total_iters,
                residual,
            });
        }
        // restart from the best Ritz vector
        start = vec;
    }
}

/// exp(beta * A) b for a symmetric operator, by Lanczos projection.
///
/// Convergence is declared when successive Krylov iterates differ by less
/// than `tol * ‖result‖`. If the basis cap is hit, the scale is halved and
/// the result obtained by time-stepping: exp(A) b = exp(A/2)(exp(A/2) b).
pub fn expm_multiply(
    n: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    beta: f64,
    b: &[f64],
    tol: f64,
    basis_cap: usize,
) -> Result<Vec<f64>> {
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut v = b.to_vec();
    for x in v.iter_mut() {
        *x /= b_norm;
    }

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta_coef: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut prev: Option<Vec<f64>> = None;

    for step in 0..basis_cap {
        let vs = &basis[step];
        matvec(vs, &mut w);
        let a = dot(vs, &w);
        alpha.push(a);
        for (wi, vi) in w.iter_mut().zip(vs) {
            *wi -= a * vi;
        }
        if step > 0 {
            let bp = beta_coef[step - 1];
            for (wi, ui) in w.iter_mut().zip(&basis[step - 1]) {
                *wi -= bp * ui;
            }
        }
        for u in &basis {
            let c = dot(&w, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
        let bnext = norm(&w);

        // current approximation: ‖b‖ * V exp(beta T) e1
        let (theta, s) = tridiag_eigen(&alpha, &beta_coef);
        let m = alpha.len();
        let mut coef = vec![0.0; m];
        for (j, cj) in coef.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &t) in theta.iter().enumerate() {
                acc += s[(j, k)] * (beta * t).exp() * s[(0, k)];
            }
            *cj = acc * b_norm;
        }
        let mut approx = vec![0.0; n];
        for (j, basis_vec) in basis.iter().take(m).enumerate() {
            for (ai, bi) in approx.iter_mut().zip(basis_vec) {
                *ai += coef[j] * bi;
            }
        }

        let done = if let Some(p) = &prev {
            let diff: f64 = approx
                .iter()
                .zip(p)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
            diff <= tol * norm(&approx).max(f64::MIN_POSITIVE)
        } else {
            false
        };
        if done || bnext < 1e-14 {
            return Ok(approx);
        }
        prev = Some(approx);

        beta_coef.push(bnext);
        basis.push(w.iter().map(|x| x / bnext).collect());
    }

    // Restart by halving the time step.
    let half = expm_multiply(n, matvec, beta / 2.0, b, tol, basis_cap)?;
    expm_multiply(n, matvec, beta / 2.0, &half, tol, basis_cap)
}

/// [f(A)]_{ii} by Lanczos (Gauss) quadrature from the unit vector e_i.
///
/// Iterates until the quadrature estimate is stable to `tol` relative, or
/// the cap is reached (the last estimate is returned; for entire functions
/// of bounded spectra the quadrature converges long before that).
pub fn diagonal_function_entry(
    n: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    i: usize,
    f: &dyn Fn(f64) -> f64,
    tol: f64,
    cap: usize,
) -> f64 {
    let mut start = vec![0.0; n];
    start[i] = 1.0;

    let mut basis: Vec<Vec<f64>> = vec![start];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    for step in 0..cap.min(n) {
        let vs = &basis[step];
        matvec(vs, &mut w);
        let a = dot(vs, &w);
        alpha.push(a);
        for (wi, vi) in w.iter_mut().zip(vs) {
            *wi -= a * vi;
        }
        if step > 0 {
            let bp = beta[step - 1];
            for (wi, ui) in w.iter_mut().zip(&basis[step - 1]) {
                *wi -= bp * ui;
            }
        }
        for u in &basis {
            let c = dot(&w, u);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= c * ui;
            }
        }
        let (theta, s) = tridiag_eigen(&alpha, &beta);
        let estimate: f64 = theta
            .iter()
            .enumerate()
            .map(|(k, &t)| s[(0, k)] * s[(0, k)] * f(t))
            .sum();
        if !prev.is_nan() && (estimate - prev).abs() <= tol * estimate.abs().max(1e-300) {
            return estimate;
        }
        prev = estimate;
        let bnext = norm(&w);
        if bnext < 1e-14 {
            return estimate;
        }
        beta.push(bnext);
        basis.push(w.iter().map(|x| x / bnext).collect());
    }
    prev
}

/// z' f(A) z by the same Gauss quadrature, for stochastic trace estimation.
pub fn quadratic_form(
    n: usize,
    matvec: &dyn Fn(&[f64], &mut [f64]),
    z: &[f64],
    f: &dyn Fn(f64) -> f64,
    steps: usize,
) -> f64 {
    let z_norm_sq = dot(z, z);
    if z_norm_sq == 0.0 {
        return 0.0;
    }
    let basis = run_lanczos(n, matvec, z, steps.min(n), None);
    let (theta, s) = tridiag_eigen(&basis.alpha, &basis.beta);
    let estimate: f64 = theta
        .iter()
        .enumerate()
        .map(|(k, &t)| s[(0, k)] * s[(0, k)] * f(t))
        .sum();
    estimate * z_norm_sq
}
