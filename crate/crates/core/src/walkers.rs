//! Walk-based centralities: Katz, eigenvector, subgraph centrality and
//! total communicability, with their matrix-function kernels.
//!
//! Katz solves (I - αA)x = 1 by conjugate gradient; the exponential-based
//! measures go through the full spectrum below the dense threshold and
//! through Lanczos (Krylov action for TC, per-node Gauss quadrature for
//! SUB) above it. Spectra here are bounded by the maximum degree, so the
//! exponential is well conditioned throughout.

use crate::centrality::{CentralityParams, CentralityVector, Measure};
use crate::error::{Error, Result};
use crate::graph::{connected_components, MolecularGraph};
use crate::lanczos;
use crate::spectral::{adjacency_spectrum, spectral_radius, DENSE_THRESHOLD};
use rayon::prelude::*;

/// Default attenuation for subgraph centrality and total communicability.
pub const DEFAULT_BETA: f64 = 1.0;

/// Default safety factor for the automatic Katz attenuation choice.
pub const DEFAULT_GAMMA: f64 = 1.1;

/// Krylov basis cap for the exponential action.
const KRYLOV_CAP: usize = 60;

/// Policy for selecting the Katz attenuation factor α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KatzPolicy {
    /// Use this α for every graph (validity still checked per graph).
    Fixed(f64),
    /// α = 1 / (gamma * max ρ(A)) over the frame set; gamma > 1.
    Auto { gamma: f64 },
}

impl Default for KatzPolicy {
    fn default() -> Self {
        KatzPolicy::Auto {
            gamma: DEFAULT_GAMMA,
        }
    }
}

/// One α for a whole frame set: α = 1/(gamma · max ρ). With gamma > 1 the
/// result is valid (α·ρ < 1) for every graph in the set.
pub fn choose_alpha(frame_spectral_radii: &[f64], gamma: f64) -> Result<f64> {
    if frame_spectral_radii.is_empty() {
        return Err(Error::Param("no spectral radii supplied".into()));
    }
    if !(gamma > 1.0) {
        return Err(Error::Param(format!("gamma must exceed 1, got {gamma}")));
    }
    let max_rho = frame_spectral_radii
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if !(max_rho > 0.0) {
        return Err(Error::Param(format!(
            "maximum spectral radius must be positive, got {max_rho}"
        )));
    }
    Ok(1.0 / (gamma * max_rho))
}

/// Degree centrality: the score of a node is its degree.
pub fn degree_centrality(g: &MolecularGraph) -> CentralityVector {
    CentralityVector::new(
        Measure::Degree,
        g.degrees().iter().map(|&d| d as f64).collect(),
        CentralityParams::default(),
        g.m(),
    )
}

/// Conjugate gradient for (I - αA) x = b. The operator is SPD whenever
/// α ρ(A) < 1, which the caller has already verified.
fn katz_solve(g: &MolecularGraph, alpha: f64, tol: f64) -> Result<Vec<f64>> {
    let n = g.n();
    let b = vec![1.0; n];
    let mut x = b.clone(); // x = 1 is exact for the empty graph
    let apply = |x: &[f64], y: &mut [f64]| {
        g.adj_matvec(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = *xi - alpha * *yi;
        }
    };
    let mut ax = vec![0.0; n];
    apply(&x, &mut ax);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut p = r.clone();
    let b_norm = (n as f64).sqrt();
    let mut rs_old: f64 = r.iter().map(|v| v * v).sum();
    let cap = 20 * n.max(10);
    for _ in 0..cap {
        if rs_old.sqrt() <= tol * b_norm {
            return Ok(x);
        }
        let mut ap = vec![0.0; n];
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(pi, ai)| pi * ai).sum();
        let step = rs_old / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        let dir = rs_new / rs_old;
        for i in 0..n {
            p[i] = r[i] + dir * p[i];
        }
        rs_old = rs_new;
    }
    if rs_old.sqrt() <= tol * b_norm {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            iterations: cap,
            residual: rs_old.sqrt(),
        })
    }
}

/// Katz centrality KC = (I - αA)^{-1} 1. Requires 0 < α < 1/ρ(A).
pub fn katz(g: &MolecularGraph, alpha: f64) -> Result<CentralityVector> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Param(format!("alpha must be positive, got {alpha}")));
    }
    let rho = spectral_radius(g)?;
    if rho > 0.0 && alpha >= 1.0 / rho {
        return Err(Error::Param(format!(
            "alpha {alpha} is out of range: the walk series requires alpha < 1/rho(A) = {:.6} \
             (rho(A) = {rho:.6})",
            1.0 / rho
        )));
    }
    let scores = if g.m() == 0 {
        vec![1.0; g.n()]
    } else {
        katz_solve(g, alpha, 1e-12)?
    };
    Ok(CentralityVector::new(
        Measure::Katz,
        scores,
        CentralityParams {
            alpha: Some(alpha),
            ..Default::default()
        },
        g.m(),
    ))
}

fn dominant_eigenvector(g: &MolecularGraph, nodes: &[usize]) -> Result<Vec<f64>> {
    let k = nodes.len();
    if k == 1 {
        return Ok(vec![1.0]);
    }
    // Subgraph adjacency restricted to `nodes`.
    let mut local = vec![usize::MAX; g.n()];
    for (li, &v) in nodes.iter().enumerate() {
        local[v] = li;
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (li, &v) in nodes.iter().enumerate() {
        for &w in g.neighbors(v) {
            let lw = local[w as usize];
            if lw != usize::MAX {
                adj[li].push(lw as u32);
            }
        }
    }
    let mv = |x: &[f64], y: &mut [f64]| {
        for (i, neigh) in adj.iter().enumerate() {
            y[i] = neigh.iter().map(|&j| x[j as usize]).sum();
        }
    };
    let mut vec = if k <= 64 {
        let mut a = nalgebra::DMatrix::<f64>::zeros(k, k);
        for (i, neigh) in adj.iter().enumerate() {
            for &j in neigh {
                a[(i, j as usize)] = 1.0;
            }
        }
        let eig = nalgebra::SymmetricEigen::new(a);
        let top = (0..k)
            .max_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]))
            .unwrap();
        eig.eigenvectors.column(top).iter().cloned().collect()
    } else {
        let (_, v) = lanczos::extremal_eigenpair(
            k,
            &mv,
            lanczos::Extremal::Largest,
            crate::spectral::EIG_TOL,
            10 * k,
            None,
        )?;
        v
    };
    // deterministic orientation: largest-magnitude entry positive
    let lead = vec
        .iter()
        .cloned()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if lead < 0.0 {
        vec.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(vec)
}

/// Eigenvector centrality: the dominant unit eigenvector, oriented
/// positive. On a disconnected graph it is computed per component and the
/// result is flagged `per_component`; the assembled vector is renormalized
/// to unit Euclidean norm.
pub fn eigenvector_centrality(g: &MolecularGraph) -> Result<CentralityVector> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Param("eigenvector centrality of empty graph".into()));
    }
    let comps = connected_components(g);
    let connected = comps.count() == 1;
    let mut scores = vec![0.0; n];
    for c in 0..comps.count() {
        let nodes: Vec<usize> = (0..n).filter(|&v| comps.component_id[v] == c).collect();
        let local = dominant_eigenvector(g, &nodes)?;
        for (li, &v) in nodes.iter().enumerate() {
            scores[v] = local[li];
        }
    }
    let norm: f64 = scores.iter().map(|s| s * s).sum::<f64>().sqrt();
    scores.iter_mut().for_each(|s| *s /= norm);
    Ok(CentralityVector::new(
        Measure::Eigenvector,
        scores,
        CentralityParams {
            per_component: !connected,
            ..Default::default()
        },
        g.m(),
    ))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Param(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

/// Subgraph centrality SUB(v_i) = [exp(βA)]_{ii}.
///
/// Dense path (full spectrum) up to [`DENSE_THRESHOLD`] nodes, per-node
/// Lanczos quadrature above.
pub fn subgraph_centrality(g: &MolecularGraph, beta: f64) -> Result<CentralityVector> {
    check_beta(beta)?;
    if g.n() <= DENSE_THRESHOLD {
        subgraph_centrality_spectral(g, beta)
    } else {
        subgraph_centrality_quadrature(g, beta)
    }
}

/// SUB from the full eigendecomposition: Σ_k e^{βλ_k} p_k(i)^2.
pub fn subgraph_centrality_spectral(g: &MolecularGraph, beta: f64) -> Result<CentralityVector> {
    check_beta(beta)?;
    let n = g.n();
    let spectrum = adjacency_spectrum(g, true)?;
    let vectors = spectrum.eigenvectors.as_ref().unwrap();
    let weights: Vec<f64> = spectrum.eigenvalues.iter().map(|l| (beta * l).exp()).collect();
    let mut scores = vec![0.0; n];
    for k in 0..n {
        let col = vectors.column(k);
        for (i, score) in scores.iter_mut().enumerate() {
            *score += weights[k] * col[i] * col[i];
        }
    }
    Ok(CentralityVector::new(
        Measure::Subgraph,
        scores,
        CentralityParams {
            beta: Some(beta),
            ..Default::default()
        },
        g.m(),
    ))
}

/// SUB by per-node Lanczos quadrature; nodes are independent and run in
/// parallel.
pub fn subgraph_centrality_quadrature(g: &MolecularGraph, beta: f64) -> Result<CentralityVector> {
    check_beta(beta)?;
    let n = g.n();
    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mv = |x: &[f64], y: &mut [f64]| g.adj_matvec(x, y);
            lanczos::diagonal_function_entry(n, &mv, i, &|t| (beta * t).exp(), 1e-13, KRYLOV_CAP)
        })
        .collect();
    Ok(CentralityVector::new(
        Measure::Subgraph,
        scores,
        CentralityParams {
            beta: Some(beta),
            ..Default::default()
        },
        g.m(),
    ))
}

/// Total communicability TC = exp(βA) 1 via the Krylov action of the
/// matrix exponential.
pub fn total_communicability(g: &MolecularGraph, beta: f64) -> Result<CentralityVector> {
    check_beta(beta)?;
    let n = g.n();
    let mv = |x: &[f64], y: &mut [f64]| g.adj_matvec(x, y);
    let scores = lanczos::expm_multiply(n, &mv, beta, &vec![1.0; n], 1e-12, KRYLOV_CAP)?;
    Ok(CentralityVector::new(
        Measure::TotalCommunicability,
        scores,
        CentralityParams {
            beta: Some(beta),
            ..Default::default()
        },
        g.m(),
    ))
}

/// TC from the full eigendecomposition: Σ_k e^{βλ_k} (p_k' 1) p_k(i).
/// The dense cross-check route for [`total_communicability`].
pub fn total_communicability_spectral(g: &MolecularGraph, beta: f64) -> Result<CentralityVector> {
    check_beta(beta)?;
    let n = g.n();
    let spectrum = adjacency_spectrum(g, true)?;
    if !spectrum.full {
        return Err(Error::Param(format!(
            "spectral TC route requires the dense path (N <= {DENSE_THRESHOLD})"
        )));
    }
    let vectors = spectrum.eigenvectors.as_ref().unwrap();
    let mut scores = vec![0.0; n];
    for k in 0..n {
        let col = vectors.column(k);
        let weight = (beta * spectrum.eigenvalues[k]).exp() * col.iter().sum::<f64>();
        for (i, score) in scores.iter_mut().enumerate() {
            *score += weight * col[i];
        }
    }
    Ok(CentralityVector::new(
        Measure::TotalCommunicability,
        scores,
        CentralityParams {
            beta: Some(beta),
            ..Default::default()
        },
        g.m(),
    ))
}
