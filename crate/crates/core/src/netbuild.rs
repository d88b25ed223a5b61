//! Minimum-image distances under periodic boundary conditions and the
//! cutoff adjacency graph.
//!
//! Two molecules are connected iff their minimum-image distance is less
//! than or equal to the cutoff. The cutoff must stay below half the
//! shortest box edge so the nearest periodic image is unique.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::graph::MolecularGraph;

/// Default O-O cutoff in nm.
pub const DEFAULT_CUTOFF: f64 = 0.35;

/// Pair-search strategy. `Auto` picks the cell list above 1000 particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborStrategy {
    #[default]
    Auto,
    AllPairs,
    CellList,
}

#[derive(Debug, Clone, Copy)]
pub struct CutoffConfig {
    /// Edge cutoff in nm. Must satisfy 0 < r_cut < min(box)/2.
    pub r_cut: f64,
    pub strategy: NeighborStrategy,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        CutoffConfig {
            r_cut: DEFAULT_CUTOFF,
            strategy: NeighborStrategy::Auto,
        }
    }
}

impl CutoffConfig {
    fn validate(&self, box_lengths: [f64; 3]) -> Result<()> {
        if !(self.r_cut > 0.0) || !self.r_cut.is_finite() {
            return Err(Error::Config(format!(
                "cutoff must be positive, got {}",
                self.r_cut
            )));
        }
        let half_min = box_lengths.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
        if self.r_cut >= half_min {
            return Err(Error::Config(format!(
                "cutoff {} must be below half the shortest box edge ({half_min}); \
                 the nearest periodic image is otherwise not unique",
                self.r_cut
            )));
        }
        Ok(())
    }
}

/// Minimum-image distance between two points in a rectangular periodic box.
///
/// Per axis the difference is wrapped into [0, L) and folded to L - d when
/// it exceeds L/2; the result is the Euclidean norm of the folded
/// components. Coordinates may lie outside the box.
pub fn pbc_distance(p: [f64; 3], q: [f64; 3], box_lengths: [f64; 3]) -> Result<f64> {
    if box_lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Config(format!(
            "non-positive box component in {box_lengths:?}"
        )));
    }
    Ok(pbc_distance_unchecked(p, q, box_lengths))
}

#[inline]
pub(crate) fn pbc_distance_unchecked(p: [f64; 3], q: [f64; 3], box_lengths: [f64; 3]) -> f64 {
    let mut sum = 0.0;
    for a in 0..3 {
        let l = box_lengths[a];
        // |p - q| first keeps the fold exactly symmetric in p and q
        let mut d = (p[a] - q[a]).abs().rem_euclid(l);
        if d > l / 2.0 {
            d = l - d;
        }
        sum += d * d;
    }
    sum.sqrt()
}

/// Builds the cutoff graph: nodes are the frame's particles, an edge joins
/// every pair at minimum-image distance <= r_cut (boundary inclusive).
pub fn build_graph(frame: &Frame, cfg: &CutoffConfig) -> Result<MolecularGraph> {
    cfg.validate(frame.box_lengths())?;
    let n = frame.len();
    let use_cells = match cfg.strategy {
        NeighborStrategy::AllPairs => false,
        NeighborStrategy::CellList => true,
        NeighborStrategy::Auto => n > 1000,
    };
    let edges = if use_cells {
        cell_list_edges(frame, cfg.r_cut)
    } else {
        all_pairs_edges(frame, cfg.r_cut)
    };
    MolecularGraph::from_edges(n, edges)
}

fn all_pairs_edges(frame: &Frame, r_cut: f64) -> Vec<(u32, u32)> {
    let pos = frame.positions();
    let b = frame.box_lengths();
    let mut edges = Vec::new();
    for i in 0..pos.len() {
        for j in (i + 1)..pos.len() {
            if pbc_distance_unchecked(pos[i], pos[j], b) <= r_cut {
                edges.push((i as u32, j as u32));
            }
        }
    }
    edges
}

fn cell_list_edges(frame: &Frame, r_cut: f64) -> Vec<(u32, u32)> {
    let b = frame.box_lengths();
    // Cubic cells with side >= r_cut; fewer than 3 cells on an axis makes
    // the 27-cell scan revisit cells, so fall back to the exhaustive scan.
    let ncells: [usize; 3] = [
        (b[0] / r_cut).floor() as usize,
        (b[1] / r_cut).floor() as usize,
        (b[2] / r_cut).floor() as usize,
    ];
    if ncells.iter().any(|&c| c < 3) {
        return all_pairs_edges(frame, r_cut);
    }

    let pos = frame.positions();
    let cell_of = |p: [f64; 3]| -> [usize; 3] {
        let mut c = [0usize; 3];
        for a in 0..3 {
            let wrapped = p[a].rem_euclid(b[a]);
            let idx = (wrapped / b[a] * ncells[a] as f64).floor() as usize;
            c[a] = idx.min(ncells[a] - 1);
        }
        c
    };
    let flat = |c: [usize; 3]| (c[0] * ncells[1] + c[1]) * ncells[2] + c[2];

    let mut bins: Vec<Vec<u32>> = vec![Vec::new(); ncells[0] * ncells[1] * ncells[2]];
    for (i, &p) in pos.iter().enumerate() {
        bins[flat(cell_of(p))].push(i as u32);
    }

    let mut edges = Vec::new();
    for (i, &p) in pos.iter().enumerate() {
        let c = cell_of(p);
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                for dz in -1i64..=1 {
                    let nc = [
                        ((c[0] as i64 + dx).rem_euclid(ncells[0] as i64)) as usize,
                        ((c[1] as i64 + dy).rem_euclid(ncells[1] as i64)) as usize,
                        ((c[2] as i64 + dz).rem_euclid(ncells[2] as i64)) as usize,
                    ];
                    for &j in &bins[flat(nc)] {
                        if (j as usize) > i
                            && pbc_distance_unchecked(p, pos[j as usize], b) <= r_cut
                        {
                            edges.push((i as u32, j));
                        }
                    }
                }
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::synth;

    fn frame_of(positions: Vec<[f64; 3]>, b: [f64; 3]) -> Frame {
        let n = positions.len();
        Frame::new(positions, b, vec!["OW".to_string(); n], "t").unwrap()
    }

    #[test]
    fn pbc_folds_across_boundary() {
        let d = pbc_distance([0.1, 0.0, 0.0], [0.9, 0.0, 0.0], [1.0, 1.0, 1.0]).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pbc_identical_points() {
        let p = [0.2, 0.3, 0.4];
        assert_eq!(pbc_distance(p, p, [1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn pbc_rejects_bad_box() {
        assert!(pbc_distance([0.0; 3], [0.0; 3], [1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn pbc_symmetry_and_translation() {
        let p = [0.2, 0.3, 0.4];
        let q = [0.9, 0.9, 0.05];
        let b = [1.0, 1.0, 1.0];
        let d1 = pbc_distance(p, q, b).unwrap();
        let d2 = pbc_distance(q, p, b).unwrap();
        assert_eq!(d1, d2);
        let shifted = [p[0] + 3.0, p[1] - 2.0, p[2] + 1.0];
        let d3 = pbc_distance(shifted, q, b).unwrap();
        assert!((d1 - d3).abs() < 1e-12);
    }

    /// Brute force over the 27 periodic images.
    fn image_min_distance(p: [f64; 3], q: [f64; 3], b: [f64; 3]) -> f64 {
        let wrap = |x: f64, l: f64| x.rem_euclid(l);
        let pw = [wrap(p[0], b[0]), wrap(p[1], b[1]), wrap(p[2], b[2])];
        let qw = [wrap(q[0], b[0]), wrap(q[1], b[1]), wrap(q[2], b[2])];
        let mut best = f64::INFINITY;
        for kx in -1i32..=1 {
            for ky in -1i32..=1 {
                for kz in -1i32..=1 {
                    let dx = pw[0] - qw[0] + kx as f64 * b[0];
                    let dy = pw[1] - qw[1] + ky as f64 * b[1];
                    let dz = pw[2] - qw[2] + kz as f64 * b[2];
                    best = best.min((dx * dx + dy * dy + dz * dz).sqrt());
                }
            }
        }
        best
    }

    #[test]
    fn pbc_matches_27_image_brute_force() {
        let d = pbc_distance([0.2, 0.3, 0.4], [0.9, 0.9, 0.05], [1.0, 1.0, 1.0]).unwrap();
        let oracle = image_min_distance([0.2, 0.3, 0.4], [0.9, 0.9, 0.05], [1.0, 1.0, 1.0]);
        assert!((d - oracle).abs() < 1e-15);
    }

    #[test]
    fn boundary_distance_is_inclusive() {
        // a pair exactly at the computed cutoff distance is an edge;
        // one ulp below the pair distance is not
        let p = [0.0, 0.0, 0.0];
        let q = [0.35, 0.0, 0.0];
        let d = pbc_distance(p, q, [2.0, 2.0, 2.0]).unwrap();
        let f = frame_of(vec![p, q], [2.0, 2.0, 2.0]);
        let at = build_graph(
            &f,
            &CutoffConfig {
                r_cut: d,
                strategy: NeighborStrategy::AllPairs,
            },
        )
        .unwrap();
        assert_eq!(at.m(), 1);
        let below = build_graph(
            &f,
            &CutoffConfig {
                r_cut: f64::from_bits(d.to_bits() - 1),
                strategy: NeighborStrategy::AllPairs,
            },
        )
        .unwrap();
        assert_eq!(below.m(), 0);

        let f2 = frame_of(vec![[0.0, 0.0, 0.0], [0.351, 0.0, 0.0]], [2.0, 2.0, 2.0]);
        let g2 = build_graph(&f2, &CutoffConfig::default()).unwrap();
        assert_eq!(g2.m(), 0);
    }

    #[test]
    fn cutoff_must_be_below_half_box() {
        let f = frame_of(vec![[0.0; 3]], [0.6, 2.0, 2.0]);
        let cfg = CutoffConfig {
            r_cut: 0.35,
            strategy: NeighborStrategy::Auto,
        };
        assert!(matches!(build_graph(&f, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn cell_list_matches_all_pairs() {
        let f = synth::random_frame(50, [2.0, 2.2, 1.8], 11).unwrap();
        let ap = build_graph(
            &f,
            &CutoffConfig {
                r_cut: 0.4,
                strategy: NeighborStrategy::AllPairs,
            },
        )
        .unwrap();
        let cl = build_graph(
            &f,
            &CutoffConfig {
                r_cut: 0.4,
                strategy: NeighborStrategy::CellList,
            },
        )
        .unwrap();
        assert_eq!(ap.edges(), cl.edges());
    }

    #[test]
    fn geometric_diamond_lattice_is_4_regular() {
        // bond length = cell_len * sqrt(3)/4; cutoff halfway to the next shell
        let f = synth::diamond_lattice_frame(2, 0.7).unwrap();
        let cfg = CutoffConfig {
            r_cut: 0.7 * 0.52,
            strategy: NeighborStrategy::AllPairs,
        };
        let g = build_graph(&f, &cfg).unwrap();
        assert_eq!(g.n(), 64);
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn graph_independent_of_particle_order() {
        let f = synth::random_frame(30, [2.0, 2.0, 2.0], 3).unwrap();
        let g = build_graph(&f, &CutoffConfig::default()).unwrap();
        // reverse the particle order
        let rev: Vec<[f64; 3]> = f.positions().iter().rev().cloned().collect();
        let fr = frame_of(rev, f.box_lengths());
        let gr = build_graph(&fr, &CutoffConfig::default()).unwrap();
        let n = g.n() as u32;
        let relabeled: Vec<(u32, u32)> = gr
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (n - 1 - a, n - 1 - b);
                (x.min(y), x.max(y))
            })
            .collect();
        let mut relabeled = relabeled;
        relabeled.sort_unstable();
        assert_eq!(g.edges(), relabeled.as_slice());
    }
}
