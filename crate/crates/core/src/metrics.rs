//! Combinatorial global descriptors: cycle counts from spectral moments,
//! path and star fragment counts, clustering coefficients, transitivity
//! and degree assortativity.
//!
//! All fragment arithmetic is exact 64-bit integer work with checked
//! conversions; the closed-form divisions are asserted exact, since an
//! inexact division can only come from a bug.

use crate::error::{Error, Result};
use crate::graph::MolecularGraph;
use crate::spectral::closed_walks_per_node;

/// Per-node triangle counts t_i by sorted-neighbor-list intersection.
pub fn triangles_per_node(g: &MolecularGraph) -> Vec<u64> {
    let n = g.n();
    let mut t = vec![0u64; n];
    for &(a, b) in g.edges() {
        let (na, nb) = (g.neighbors(a as usize), g.neighbors(b as usize));
        // count common neighbors of a and b
        let (mut i, mut j) = (0, 0);
        let mut common = 0u64;
        while i < na.len() && j < nb.len() {
            match na[i].cmp(&nb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        t[a as usize] += common;
        t[b as usize] += common;
        // each triangle through edge (a,b) also counts once at the apex
    }
    // every triangle was counted twice at each of its corners (once per
    // incident edge), so halve
    for x in t.iter_mut() {
        debug_assert!(*x % 2 == 0);
        *x /= 2;
    }
    t
}

fn exact_div(value: i128, divisor: i128, what: &str) -> Result<u64> {
    if value % divisor != 0 || value < 0 {
        return Err(Error::Internal(format!(
            "{what}: {value} is not a nonnegative multiple of {divisor}"
        )));
    }
    u64::try_from(value / divisor)
        .map_err(|_| Error::Internal(format!("{what} overflows u64")))
}

/// Cycle counts (|S_3|, |S_4|, |S_5|) from the spectral moments:
///
/// |S_3| = μ_3/6,
/// |S_4| = (μ_4 - 2 Σ k_i(k_i-1) - 2m)/8,
/// |S_5| = (μ_5 - 30|S_3| - 10 Σ_{k_i>2} ([A^3]_{ii}/2)(k_i-2))/10.
pub fn cycle_counts(g: &MolecularGraph) -> Result<(u64, u64, u64)> {
    let mu3 = crate::spectral::spectral_moment(g, 3)? as i128;
    let mu4 = crate::spectral::spectral_moment(g, 4)? as i128;
    let mu5 = crate::spectral::spectral_moment(g, 5)? as i128;
    let m = g.m() as i128;

    let s3 = exact_div(mu3, 6, "S3 = mu3/6")?;

    let sum_kk1: i128 = g
        .degrees()
        .iter()
        .map(|&k| (k as i128) * (k as i128 - 1))
        .sum();
    let s4 = exact_div(mu4 - 2 * sum_kk1 - 2 * m, 8, "S4")?;

    // [A^3]_{ii}/2 is the triangle count at node i
    let t = triangles_per_node(g);
    let correction: i128 = g
        .degrees()
        .iter()
        .zip(&t)
        .filter(|(&k, _)| k > 2)
        .map(|(&k, &ti)| (ti as i128) * (k as i128 - 2))
        .sum();
    let s5 = exact_div(mu5 - 30 * s3 as i128 - 10 * correction, 10, "S5")?;

    // consistency: diag(A^3) must agree with the triangle counts
    let walks3 = closed_walks_per_node(g, 3)?;
    for (i, (&w, &ti)) in walks3.iter().zip(&t).enumerate() {
        if w != 2 * ti {
            return Err(Error::Internal(format!(
                "closed 3-walks at node {i} ({w}) disagree with triangles ({ti})"
            )));
        }
    }
    Ok((s3, s4, s5))
}

/// Fragment counts (|P_1|, |P_2|, |P_3|, |S_{1,3}|):
///
/// |P_1| = m, |P_2| = Σ k_i(k_i-1)/2,
/// |P_3| = Σ_{(i,j) in E} (k_i-1)(k_j-1) - 3|S_3|,
/// |S_{1,3}| = Σ_i C(k_i, 3).
pub fn fragment_counts(g: &MolecularGraph) -> Result<(u64, u64, u64, u64)> {
    let p1 = g.m() as u64;
    let p2_twice: i128 = g
        .degrees()
        .iter()
        .map(|&k| (k as i128) * (k as i128 - 1))
        .sum();
    let p2 = exact_div(p2_twice, 2, "P2")?;

    let (s3, _, _) = cycle_counts(g)?;
    let edge_sum: i128 = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            (g.degree(a as usize) as i128 - 1) * (g.degree(b as usize) as i128 - 1)
        })
        .sum();
    let p3_val = edge_sum - 3 * s3 as i128;
    let p3 = u64::try_from(p3_val.max(0))
        .map_err(|_| Error::Internal("P3 overflows u64".into()))?;
    if p3_val < 0 {
        return Err(Error::Internal(format!("negative P3 count {p3_val}")));
    }

    let s13: i128 = g
        .degrees()
        .iter()
        .map(|&k| {
            let k = k as i128;
            k * (k - 1) * (k - 2) / 6
        })
        .sum();
    let s13 = u64::try_from(s13).map_err(|_| Error::Internal("S13 overflows u64".into()))?;
    Ok((p1, p2, p3, s13))
}

/// Watts-Strogatz clustering: per-node C_i = 2 t_i / (k_i (k_i - 1)) with
/// C_i = 0 for degree < 2, the mean C̄, and the transitivity index
/// C = 3|S_3|/|P_2| (absent when the graph has no 2-paths).
pub fn clustering(g: &MolecularGraph) -> Result<Clustering> {
    let t = triangles_per_node(g);
    let per_node: Vec<f64> = g
        .degrees()
        .iter()
        .zip(&t)
        .map(|(&k, &ti)| {
            if k < 2 {
                0.0
            } else {
                2.0 * ti as f64 / (k as f64 * (k as f64 - 1.0))
            }
        })
        .collect();
    let c_bar = if per_node.is_empty() {
        0.0
    } else {
        per_node.iter().sum::<f64>() / per_node.len() as f64
    };
    let (_, p2, _, _) = fragment_counts(g)?;
    let (s3, _, _) = cycle_counts(g)?;
    let transitivity = (p2 > 0).then(|| 3.0 * s3 as f64 / p2 as f64);
    Ok(Clustering {
        per_node,
        c_bar,
        transitivity,
        triangles: t,
    })
}

#[derive(Debug, Clone)]
pub struct Clustering {
    pub per_node: Vec<f64>,
    pub c_bar: f64,
    /// 3|S_3|/|P_2|; absent when P_2 = 0.
    pub transitivity: Option<f64>,
    pub triangles: Vec<u64>,
}

/// Degree assortativity
/// r = |P_2|(|P_{3/2}| + C - |P_{2/1}|) / (3|S_{1,3}| + |P_2|(1 - |P_{2/1}|)).
/// Returns None when the denominator vanishes (regular graphs).
pub fn assortativity(g: &MolecularGraph) -> Result<Option<f64>> {
    let (p1, p2, p3, s13) = fragment_counts(g)?;
    if p1 == 0 || p2 == 0 {
        return Ok(None);
    }
    let (s3, _, _) = cycle_counts(g)?;
    let c = 3.0 * s3 as f64 / p2 as f64;
    let p21 = p2 as f64 / p1 as f64;
    let p32 = p3 as f64 / p2 as f64;
    let denominator = 3.0 * s13 as f64 + p2 as f64 * (1.0 - p21);
    if denominator.abs() < 1e-9 {
        return Ok(None);
    }
    Ok(Some(p2 as f64 * (p32 + c - p21) / denominator))
}

/// All combinatorial global descriptors of one graph.
#[derive(Debug, Clone)]
pub struct GlobalMetrics {
    pub n: usize,
    pub m: u64,
    pub s3: u64,
    pub s4: u64,
    pub s5: u64,
    pub p1: u64,
    pub p2: u64,
    pub p3: u64,
    pub s13: u64,
    pub c_bar: f64,
    pub transitivity: Option<f64>,
    pub assortativity: Option<f64>,
    pub triangles_per_node: Vec<u64>,
}

pub fn global_metrics(g: &MolecularGraph) -> Result<GlobalMetrics> {
    let (s3, s4, s5) = cycle_counts(g)?;
    let (p1, p2, p3, s13) = fragment_counts(g)?;
    let cl = clustering(g)?;
    let r = assortativity(g)?;
    Ok(GlobalMetrics {
        n: g.n(),
        m: g.m() as u64,
        s3,
        s4,
        s5,
        p1,
        p2,
        p3,
        s13,
        c_bar: cl.c_bar,
        transitivity: cl.transitivity,
        assortativity: r,
        triangles_per_node: cl.triangles,
    })
}

/// How the relative cycle profile is normalized across temperature sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProfileScope {
    /// One maximum across every group in the comparison (default).
    #[default]
    Global,
    /// Each group normalized by its own maximum.
    PerGroup,
}

/// Relative cycle profile of one frame set: each count divided by the
/// maximum count across all frames and lengths, then averaged per length.
pub fn relative_cycle_profile(frames: &[GlobalMetrics]) -> Result<[f64; 3]> {
    profile_with_max(frames, max_count(frames))
}

/// Profiles for several frame sets (one per temperature), normalized
/// either by the global maximum or per group.
pub fn relative_cycle_profiles(
    groups: &[&[GlobalMetrics]],
    scope: ProfileScope,
) -> Result<Vec<[f64; 3]>> {
    let global_max = groups.iter().map(|g| max_count(g)).max().unwrap_or(0);
    groups
        .iter()
        .map(|g| {
            let m = match scope {
                ProfileScope::Global => global_max,
                ProfileScope::PerGroup => max_count(g),
            };
            profile_with_max(g, m)
        })
        .collect()
}

fn max_count(frames: &[GlobalMetrics]) -> u64 {
    frames
        .iter()
        .flat_map(|f| [f.s3, f.s4, f.s5])
        .max()
        .unwrap_or(0)
}

fn profile_with_max(frames: &[GlobalMetrics], max: u64) -> Result<[f64; 3]> {
    if frames.is_empty() {
        return Err(Error::Param("empty frame list".into()));
    }
    if max == 0 {
        return Ok([0.0; 3]);
    }
    let n = frames.len() as f64;
    let mut out = [0.0; 3];
    for f in frames {
        out[0] += f.s3 as f64;
        out[1] += f.s4 as f64;
        out[2] += f.s5 as f64;
    }
    for v in out.iter_mut() {
        *v /= n * max as f64;
    }
    Ok(out)
}
