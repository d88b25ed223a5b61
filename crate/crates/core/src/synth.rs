//! Synthetic graph and frame generators for tests, benchmarks and trend
//! studies: standard families, seeded random graphs, and an ice-like
//! 4-regular periodic lattice with controlled disorder.

use crate::error::Result;
use crate::frame::Frame;
use crate::graph::MolecularGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Path P_n: 0-1-...-(n-1).
pub fn path_graph(n: usize) -> MolecularGraph {
    let edges = (0..n.saturating_sub(1)).map(|i| (i as u32, i as u32 + 1));
    MolecularGraph::from_edges(n, edges).expect("path edges are valid")
}

/// Cycle C_n.
pub fn cycle_graph(n: usize) -> MolecularGraph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let edges = (0..n).map(|i| (i as u32, ((i + 1) % n) as u32));
    MolecularGraph::from_edges(n, edges).expect("cycle edges are valid")
}

/// Star S_k = K_{1,k}: node 0 is the center, 1..=k are leaves.
pub fn star_graph(leaves: usize) -> MolecularGraph {
    let edges = (1..=leaves).map(|i| (0u32, i as u32));
    MolecularGraph::from_edges(leaves + 1, edges).expect("star edges are valid")
}

/// Complete graph K_n.
pub fn complete_graph(n: usize) -> MolecularGraph {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i as u32, j as u32));
        }
    }
    MolecularGraph::from_edges(n, edges).expect("complete edges are valid")
}

/// Erdos-Renyi G(n, p) with a fixed seed.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<MolecularGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }
    MolecularGraph::from_edges(n, edges)
}

/// Erdos-Renyi conditioned on being connected (rejection sampling,
/// advancing the seed until success).
pub fn connected_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<MolecularGraph> {
    for attempt in 0..1000 {
        let g = erdos_renyi(n, p, seed.wrapping_add(attempt))?;
        if crate::graph::connected_components(&g).count() == 1 {
            return Ok(g);
        }
    }
    Err(crate::error::Error::Param(format!(
        "no connected G({n},{p}) found in 1000 attempts"
    )))
}

/// 4-regular bipartite periodic lattice on 2*cells^3 nodes with the
/// connectivity of the diamond lattice: the topology of a perfectly
/// ordered (ice-like) network in which every molecule has four neighbors.
///
/// Sites come in two sublattices A and B indexed by a cell (i,j,k);
/// A(i,j,k) is adjacent to B(i,j,k), B(i-1,j,k), B(i,j-1,k), B(i,j,k-1)
/// with wrap-around.
pub fn diamond_lattice(cells: usize) -> Result<MolecularGraph> {
    assert!(cells >= 2, "lattice needs at least 2 cells per axis");
    let c = cells;
    let idx = |sub: usize, i: usize, j: usize, k: usize| -> u32 {
        (sub * c * c * c + (i * c + j) * c + k) as u32
    };
    let mut edges = Vec::with_capacity(4 * c * c * c);
    for i in 0..c {
        for j in 0..c {
            for k in 0..c {
                let a = idx(0, i, j, k);
                edges.push((a, idx(1, i, j, k)));
                edges.push((a, idx(1, (i + c - 1) % c, j, k)));
                edges.push((a, idx(1, i, (j + c - 1) % c, k)));
                edges.push((a, idx(1, i, j, (k + c - 1) % c)));
            }
        }
    }
    MolecularGraph::from_edges(2 * c * c * c, edges)
}

/// Adds `count` extra edges between nodes at graph distance exactly 2,
/// the closest pairs not already bonded. Returns the augmented graph;
/// the input's edges are always a subset of the output's.
pub fn add_short_range_edges(
    g: &MolecularGraph,
    count: usize,
    seed: u64,
) -> Result<MolecularGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    // Candidate pool: all distance-2 pairs.
    let mut candidates = Vec::new();
    for v in 0..n {
        for &u in g.neighbors(v) {
            for &w in g.neighbors(u as usize) {
                let w = w as usize;
                if w > v && !g.has_edge(v, w) {
                    candidates.push((v as u32, w as u32));
                }
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates.shuffle(&mut rng);
    candidates.truncate(count);

    let edges = g.edges().iter().copied().chain(candidates);
    MolecularGraph::from_edges(n, edges)
}

/// Geometric diamond lattice frame built from conventional cubic cells
/// (8 atoms per cell), for exercising the PBC graph construction: with a
/// cutoff just above the bond length, every atom has exactly 4 neighbors.
///
/// `cell_len` is the conventional cell edge in nm; the nearest-neighbor
/// distance is `cell_len * sqrt(3)/4`.
pub fn diamond_lattice_frame(cells: usize, cell_len: f64) -> Result<Frame> {
    let basis: [[f64; 3]; 8] = [
        [0.0, 0.0, 0.0],
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [0.5, 0.5, 0.0],
        [0.25, 0.25, 0.25],
        [0.25, 0.75, 0.75],
        [0.75, 0.25, 0.75],
        [0.75, 0.75, 0.25],
    ];
    let mut positions = Vec::with_capacity(8 * cells * cells * cells);
    for i in 0..cells {
        for j in 0..cells {
            for k in 0..cells {
                for b in basis {
                    positions.push([
                        (i as f64 + b[0]) * cell_len,
                        (j as f64 + b[1]) * cell_len,
                        (k as f64 + b[2]) * cell_len,
                    ]);
                }
            }
        }
    }
    let l = cells as f64 * cell_len;
    let labels = vec!["OW".to_string(); positions.len()];
    Frame::new(positions, [l, l, l], labels, "diamond")
}

/// Random tree: each node attaches to a uniformly chosen earlier node.
pub fn random_tree(n: usize, seed: u64) -> Result<MolecularGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (1..n).map(|i| (rng.gen_range(0..i) as u32, i as u32));
    MolecularGraph::from_edges(n, edges.collect::<Vec<_>>())
}

/// Uniform random positions in the given box, seeded.
pub fn random_frame(n: usize, box_lengths: [f64; 3], seed: u64) -> Result<Frame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = (0..n)
        .map(|_| {
            [
                rng.gen::<f64>() * box_lengths[0],
                rng.gen::<f64>() * box_lengths[1],
                rng.gen::<f64>() * box_lengths[2],
            ]
        })
        .collect();
    Frame::new(positions, box_lengths, vec!["OW".to_string(); n], "random")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::connected_components;

    #[test]
    fn families_have_expected_counts() {
        assert_eq!(path_graph(5).m(), 4);
        assert_eq!(cycle_graph(6).m(), 6);
        assert_eq!(star_graph(3).m(), 3);
        assert_eq!(complete_graph(5).m(), 10);
    }

    #[test]
    fn diamond_lattice_is_4_regular_and_connected() {
        let g = diamond_lattice(3).unwrap();
        assert_eq!(g.n(), 54);
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert_eq!(connected_components(&g).count(), 1);
    }

    #[test]
    fn short_range_edges_nest() {
        let g = diamond_lattice(3).unwrap();
        let g1 = add_short_range_edges(&g, 10, 42).unwrap();
        assert_eq!(g1.m(), g.m() + 10);
        for e in g.edges() {
            assert!(g1.edges().binary_search(e).is_ok());
        }
    }
}
