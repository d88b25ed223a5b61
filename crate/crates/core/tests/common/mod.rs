//! Independent oracles shared by the property and acceptance suites:
//! exhaustive subgraph enumeration, naive shortest-path counting, and
//! rank-correlation helpers. Everything here is deliberately brute force
//! and separate from the library's computation paths.

#![allow(dead_code)]

use waternet::graph::MolecularGraph;
use waternet::synth;

/// Exhaustive simple-cycle count of length k: ordered tuples of distinct
/// vertices with consecutive edges and a closing edge, divided by 2k.
pub fn brute_cycles(g: &MolecularGraph, k: usize) -> u64 {
    let n = g.n();
    let mut count = 0u64;
    let mut tuple = Vec::with_capacity(k);
    fn extend(
        g: &MolecularGraph,
        tuple: &mut Vec<usize>,
        k: usize,
        n: usize,
        count: &mut u64,
    ) {
        if tuple.len() == k {
            let first = tuple[0];
            let last = *tuple.last().unwrap();
            if g.has_edge(last, first) {
                *count += 1;
            }
            return;
        }
        for v in 0..n {
            if tuple.contains(&v) {
                continue;
            }
            if let Some(&last) = tuple.last() {
                if !g.has_edge(last, v) {
                    continue;
                }
            }
            tuple.push(v);
            extend(g, tuple, k, n, count);
            tuple.pop();
        }
    }
    extend(g, &mut tuple, k, n, &mut count);
    count / (2 * k as u64)
}

/// Exhaustive path-of-length-k count (k edges, k+1 distinct vertices),
/// each path counted once.
pub fn brute_paths(g: &MolecularGraph, k: usize) -> u64 {
    let n = g.n();
    let mut count = 0u64;
    fn extend(g: &MolecularGraph, tuple: &mut Vec<usize>, len: usize, n: usize, count: &mut u64) {
        if tuple.len() == len {
            *count += 1;
            return;
        }
        let last = *tuple.last().unwrap();
        for v in 0..n {
            if tuple.contains(&v) || !g.has_edge(last, v) {
                continue;
            }
            tuple.push(v);
            extend(g, tuple, len, n, count);
            tuple.pop();
        }
    }
    for start in 0..n {
        let mut tuple = vec![start];
        extend(g, &mut tuple, k + 1, n, &mut count);
    }
    count / 2
}

/// Exhaustive star-fragment count |S_{1,3}|: unordered triples of distinct
/// neighbors around every center.
pub fn brute_stars13(g: &MolecularGraph) -> u64 {
    let n = g.n();
    let mut count = 0u64;
    for c in 0..n {
        let neigh = g.neighbors(c);
        let d = neigh.len();
        for a in 0..d {
            for b in (a + 1)..d {
                for e in (b + 1)..d {
                    let _ = (neigh[a], neigh[b], neigh[e]);
                    count += 1;
                }
            }
        }
    }
    count
}

/// Per-node triangle counts by triple loop.
pub fn brute_triangles_per_node(g: &MolecularGraph) -> Vec<u64> {
    let n = g.n();
    let mut t = vec![0u64; n];
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    t[a] += 1;
                    t[b] += 1;
                    t[c] += 1;
                }
            }
        }
    }
    t
}

/// BFS distances with usize::MAX for unreachable.
pub fn bfs(g: &MolecularGraph, source: usize) -> Vec<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Number of shortest paths between every pair via DP over BFS layers.
fn path_counts_from(g: &MolecularGraph, source: usize) -> (Vec<usize>, Vec<f64>) {
    let n = g.n();
    let dist = bfs(g, source);
    let mut order: Vec<usize> = (0..n).filter(|&v| dist[v] != usize::MAX).collect();
    order.sort_by_key(|&v| dist[v]);
    let mut sigma = vec![0.0; n];
    sigma[source] = 1.0;
    for &v in &order {
        if v == source {
            continue;
        }
        for &u in g.neighbors(v) {
            let u = u as usize;
            if dist[u] != usize::MAX && dist[u] + 1 == dist[v] {
                sigma[v] += sigma[u];
            }
        }
    }
    (dist, sigma)
}

/// Naive betweenness: for every unordered pair (s,t) and every interior
/// node v, add sigma(s,v)*sigma(v,t)/sigma(s,t) when v lies on a geodesic.
pub fn naive_betweenness(g: &MolecularGraph) -> Vec<f64> {
    let n = g.n();
    let all: Vec<(Vec<usize>, Vec<f64>)> = (0..n).map(|s| path_counts_from(g, s)).collect();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let (dist_s, sigma_s) = &all[s];
            let (dist_t, sigma_t) = &all[t];
            if dist_s[t] == usize::MAX {
                continue;
            }
            let d = dist_s[t];
            for v in 0..n {
                if v == s || v == t || dist_s[v] == usize::MAX || dist_t[v] == usize::MAX {
                    continue;
                }
                if dist_s[v] + dist_t[v] == d {
                    bc[v] += sigma_s[v] * sigma_t[v] / sigma_s[t];
                }
            }
        }
    }
    bc
}

/// Naive closeness with the disconnected-graph correction applied from
/// first principles.
pub fn naive_closeness(g: &MolecularGraph) -> Vec<f64> {
    let n = g.n();
    (0..n)
        .map(|v| {
            let dist = bfs(g, v);
            let reachable: Vec<usize> = dist
                .iter()
                .enumerate()
                .filter(|&(w, &d)| w != v && d != usize::MAX)
                .map(|(_, &d)| d)
                .collect();
            if reachable.is_empty() || n < 2 {
                return 0.0;
            }
            let np = reachable.len() as f64 + 1.0;
            let s: usize = reachable.iter().sum();
            (np - 1.0) * (np - 1.0) / (s as f64 * (n as f64 - 1.0))
        })
        .collect()
}

/// Kendall tau over pairs strictly ordered in both vectors
/// (Goodman-Kruskal gamma): 1 means no discordant pair exists.
pub fn kendall_tau_ties_excluded(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let da = a[i] - a[j];
            let db = b[i] - b[j];
            if da == 0.0 || db == 0.0 {
                continue;
            }
            if da.signum() == db.signum() {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    if concordant + discordant == 0 {
        return 1.0;
    }
    (concordant - discordant) as f64 / (concordant + discordant) as f64
}

/// Strict Kendall tau; panics on ties (caller must have filtered them).
pub fn kendall_tau_strict(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let da = a[i] - a[j];
            let db = b[i] - b[j];
            assert!(da != 0.0 && db != 0.0, "tie passed to strict kendall tau");
            if da.signum() == db.signum() {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    (concordant - discordant) as f64 / (n * (n - 1) / 2) as f64
}

/// Kendall tau restricted to pairs whose reference gap exceeds
/// `min_gap * max|reference|`; returns (tau, fraction of pairs resolved).
pub fn kendall_tau_resolved(a: &[f64], reference: &[f64], min_gap: f64) -> (f64, f64) {
    assert_eq!(a.len(), reference.len());
    let scale = reference.iter().cloned().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    let mut skipped = 0i64;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let dr = reference[i] - reference[j];
            let da = a[i] - a[j];
            if dr.abs() <= min_gap * scale || da == 0.0 {
                skipped += 1;
                continue;
            }
            if dr.signum() == da.signum() {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let considered = concordant + discordant;
    let tau = if considered == 0 {
        1.0
    } else {
        (concordant - discordant) as f64 / considered as f64
    };
    (tau, considered as f64 / (considered + skipped) as f64)
}

pub fn all_distinct(values: &[f64], min_rel_gap: f64) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).all(|w| {
        let scale = w[0].abs().max(w[1].abs()).max(1e-300);
        (w[1] - w[0]) / scale > min_rel_gap
    })
}

/// The generator suite for oracle equivalence: named small families plus
/// seeded random graphs with up to `max_n` nodes.
pub fn small_graph_suite(random_count: usize, max_n: usize, seed0: u64) -> Vec<MolecularGraph> {
    use rand::{Rng, SeedableRng};
    let mut suite = Vec::new();
    for n in 2..=max_n {
        suite.push(synth::path_graph(n));
        suite.push(synth::complete_graph(n));
    }
    for n in 3..=max_n {
        suite.push(synth::cycle_graph(n));
    }
    for leaves in 2..max_n {
        suite.push(synth::star_graph(leaves));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed0);
    for i in 0..random_count {
        let n = rng.gen_range(2..=max_n);
        let p = rng.gen_range(0.1..0.9);
        suite.push(synth::erdos_renyi(n, p, seed0.wrapping_add(i as u64 + 1)).unwrap());
    }
    suite
}
