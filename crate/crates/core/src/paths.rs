//! Shortest-path machinery and the geodesic centralities: closeness with
//! the Wasserman-Faust correction for disconnected graphs, and Brandes
//! betweenness.
//!
//! Graphs are unweighted by construction, so everything rests on BFS.
//! Unreachable pairs are never materialized as infinities; they are simply
//! absent from the sums.

use crate::centrality::{CentralityParams, CentralityVector, Measure};
use crate::graph::{connected_components, MolecularGraph};
use rayon::prelude::*;
use std::collections::VecDeque;

const UNREACHED: u32 = u32::MAX;

/// BFS distances from one source; UNREACHED marks the complement of the
/// source's component.
fn bfs_distances(g: &MolecularGraph, source: usize, dist: &mut [u32]) {
    dist.iter_mut().for_each(|d| *d = UNREACHED);
    dist[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v];
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] == UNREACHED {
                dist[w] = dv + 1;
                queue.push_back(w);
            }
        }
    }
}

/// All-pairs geodesic summary: distances, per-node farness, average
/// shortest path length over connected ordered pairs, and the diameter.
#[derive(Debug, Clone)]
pub struct DistanceSummary {
    n: usize,
    /// Row-major n*n hop counts, UNREACHED when no path exists.
    dist: Vec<u32>,
    /// s(v_i): sum of finite distances from node i.
    pub farness: Vec<u64>,
    /// Mean over connected ordered pairs (0 when no such pair exists).
    pub aspl: f64,
    /// Largest finite distance.
    pub diameter: u32,
}

impl DistanceSummary {
    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        let d = self.dist[i * self.n + j];
        (d != UNREACHED).then_some(d)
    }
}

pub fn distance_summary(g: &MolecularGraph) -> DistanceSummary {
    let n = g.n();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|src| {
            let mut d = vec![UNREACHED; n];
            bfs_distances(g, src, &mut d);
            d
        })
        .collect();

    let mut dist = Vec::with_capacity(n * n);
    let mut farness = vec![0u64; n];
    let mut total = 0u64;
    let mut pairs = 0u64;
    let mut diameter = 0u32;
    for (i, row) in rows.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if d != UNREACHED && i != j {
                farness[i] += d as u64;
                total += d as u64;
                pairs += 1;
                diameter = diameter.max(d);
            }
        }
        dist.extend_from_slice(row);
    }
    let aspl = if pairs > 0 {
        total as f64 / pairs as f64
    } else {
        0.0
    };
    DistanceSummary {
        n,
        dist,
        farness,
        aspl,
        diameter,
    }
}

/// Closeness centrality with the Wasserman-Faust correction:
/// CL(v_i) = (N'-1)^2 / (s(v_i) (N-1)) inside a component of N' nodes,
/// which reduces to (N-1)/s(v_i) on a connected graph. Isolated nodes get 0.
pub fn closeness(g: &MolecularGraph) -> CentralityVector {
    let n = g.n();
    let comps = connected_components(g);
    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|v| {
            let comp_size = comps.sizes[comps.component_id[v]];
            if comp_size < 2 || n < 2 {
                return 0.0;
            }
            let mut d = vec![UNREACHED; n];
            bfs_distances(g, v, &mut d);
            let s: u64 = d
                .iter()
                .filter(|&&x| x != UNREACHED)
                .map(|&x| x as u64)
                .sum();
            let np = comp_size as f64;
            (np - 1.0) * (np - 1.0) / (s as f64 * (n as f64 - 1.0))
        })
        .collect();
    CentralityVector::new(Measure::Closeness, scores, CentralityParams::default(), g.m())
}

/// Betweenness centrality by Brandes accumulation, unordered source-target
/// pairs, endpoints excluded. Pairs in different components contribute 0.
pub fn betweenness(g: &MolecularGraph) -> CentralityVector {
    let n = g.n();
    let partial: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| brandes_pass(g, s))
        .collect();
    let mut scores = vec![0.0; n];
    for p in partial {
        for (acc, v) in scores.iter_mut().zip(p) {
            *acc += v;
        }
    }
    // each unordered pair was visited from both endpoints
    scores.iter_mut().for_each(|v| *v /= 2.0);
    CentralityVector::new(
        Measure::Betweenness,
        scores,
        CentralityParams::default(),
        g.m(),
    )
}

fn brandes_pass(g: &MolecularGraph, source: usize) -> Vec<f64> {
    let n = g.n();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    sigma[source] = 1.0;
    dist[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v as u32);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    let mut acc = vec![0.0f64; n];
    while let Some(w) = stack.pop() {
        for &v in &preds[w] {
            let v = v as usize;
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if w != source {
            acc[w] += delta[w];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use approx::assert_relative_eq;

    #[test]
    fn closeness_path3() {
        let v = closeness(&synth::path_graph(3));
        assert_relative_eq!(v.scores[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(v.scores[0], 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(v.scores[2], 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn closeness_isolated_node_is_zero() {
        let g = crate::MolecularGraph::from_edges(3, vec![(0, 1)]).unwrap();
        let v = closeness(&g);
        assert_eq!(v.scores[2], 0.0);
    }

    #[test]
    fn closeness_two_disjoint_k2() {
        let g = crate::MolecularGraph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        let v = closeness(&g);
        for s in &v.scores {
            assert_relative_eq!(*s, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn closeness_equal_on_automorphic_nodes() {
        let v = closeness(&synth::cycle_graph(7));
        for s in &v.scores {
            assert_relative_eq!(*s, v.scores[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn betweenness_path3() {
        let v = betweenness(&synth::path_graph(3));
        assert_relative_eq!(v.scores[1], 1.0, epsilon = 1e-12);
        assert_eq!(v.scores[0], 0.0);
        assert_eq!(v.scores[2], 0.0);
    }

    #[test]
    fn betweenness_star_center() {
        let v = betweenness(&synth::star_graph(3));
        assert_relative_eq!(v.scores[0], 3.0, epsilon = 1e-12);
        for leaf in 1..4 {
            assert_eq!(v.scores[leaf], 0.0);
        }
    }

    #[test]
    fn betweenness_zero_across_components() {
        let g = crate::MolecularGraph::from_edges(5, vec![(0, 1), (1, 2), (3, 4)]).unwrap();
        let v = betweenness(&g);
        assert_relative_eq!(v.scores[1], 1.0, epsilon = 1e-12);
        assert_eq!(v.scores[3], 0.0);
        assert_eq!(v.scores[4], 0.0);
    }

    #[test]
    fn distance_summary_c5() {
        let s = distance_summary(&synth::cycle_graph(5));
        assert_relative_eq!(s.aspl, 1.5, epsilon = 1e-12);
        assert_eq!(s.diameter, 2);
        assert_eq!(s.distance(0, 2), Some(2));
        assert_eq!(s.distance(0, 0), Some(0));
    }

    #[test]
    fn distance_summary_k4() {
        let s = distance_summary(&synth::complete_graph(4));
        assert_relative_eq!(s.aspl, 1.0, epsilon = 1e-12);
        assert_eq!(s.diameter, 1);
    }

    #[test]
    fn distance_summary_disconnected() {
        let g = crate::MolecularGraph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        let s = distance_summary(&g);
        assert_eq!(s.distance(0, 2), None);
        assert_relative_eq!(s.aspl, 1.0, epsilon = 1e-12);
        assert_eq!(s.diameter, 1);
        // farness counts only the reachable nodes
        assert_eq!(s.farness, vec![1, 1, 1, 1]);
    }

    #[test]
    fn distance_triangle_inequality_on_sample() {
        let g = synth::connected_erdos_renyi(20, 0.2, 6).unwrap();
        let s = distance_summary(&g);
        for i in 0..20 {
            for j in 0..20 {
                for k in 0..20 {
                    if let (Some(ij), Some(ik), Some(kj)) =
                        (s.distance(i, j), s.distance(i, k), s.distance(k, j))
                    {
                        assert!(ij <= ik + kj);
                    }
                }
            }
        }
    }

    #[test]
    fn aspl_never_increases_when_adding_edges() {
        let g = synth::cycle_graph(10);
        let before = distance_summary(&g).aspl;
        let mut edges = g.edges().to_vec();
        edges.push((0, 5));
        let h = crate::MolecularGraph::from_edges(10, edges).unwrap();
        let after = distance_summary(&h).aspl;
        assert!(after <= before + 1e-12);
    }
}
