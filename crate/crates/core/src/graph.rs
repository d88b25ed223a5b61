//! Immutable sparse graph representation: adjacency, degrees, Laplacian,
//! connectivity and density descriptors.

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use nalgebra::DMatrix;
use std::collections::VecDeque;

/// Undirected, unweighted, loop-free graph on `n` nodes, stored both as a
/// sorted edge list and as CSR adjacency. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolecularGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    degrees: Vec<u32>,
    node_map: Option<Vec<usize>>,
}

impl MolecularGraph {
    /// Builds from an edge list. Self-loops are rejected; duplicate edges
    /// (in either orientation) are collapsed.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut list: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Param(format!(
                    "edge ({a},{b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::Param(format!("self-loop at node {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();

        let mut degrees = vec![0u32; n];
        for &(a, b) in &list {
            degrees[a as usize] += 1;
            degrees[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for i in 0..n {
            offsets.push(offsets[i] + degrees[i] as usize);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * list.len()];
        for &(a, b) in &list {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }

        debug_assert_eq!(
            degrees.iter().map(|&d| d as usize).sum::<usize>(),
            2 * list.len()
        );

        Ok(MolecularGraph {
            n,
            edges: list,
            offsets,
            neighbors,
            degrees,
            node_map: None,
        })
    }

    /// Attaches a map from node index to the original particle index in the
    /// unfiltered frame, for export of per-node data.
    pub fn with_node_map(mut self, map: Vec<usize>) -> Result<Self> {
        if map.len() != self.n {
            return Err(Error::Param(format!(
                "node map length {} does not match node count {}",
                map.len(),
                self.n
            )));
        }
        self.node_map = Some(map);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges m.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted unique edges (i, j) with i < j.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn node_map(&self) -> Option<&[usize]> {
        self.node_map.as_deref()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// y = A x with the binary adjacency matrix.
    pub fn adj_matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for &j in self.neighbors(i) {
                acc += x[j as usize];
            }
            y[i] = acc;
        }
    }

    pub fn adjacency_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i as usize, j as usize)] = 1.0;
            a[(j as usize, i as usize)] = 1.0;
        }
        a
    }

    /// Relabels nodes: node i of the output is node `perm[i]` of the input.
    pub fn permuted(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Param("permutation length mismatch".into()));
        }
        let mut inverse = vec![u32::MAX; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old as usize] = new as u32;
        }
        if inverse.iter().any(|&v| v == u32::MAX) {
            return Err(Error::Param("not a permutation".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (inverse[a as usize], inverse[b as usize]));
        MolecularGraph::from_edges(self.n, edges)
    }
}

/// Partition of the nodes into connected components, ids contiguous from 0
/// in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub component_id: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// BFS partition into connected components.
pub fn connected_components(g: &MolecularGraph) -> ComponentPartition {
    let n = g.n();
    let mut component_id = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component_id[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        component_id[start] = id;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &w in g.neighbors(v) {
                let w = w as usize;
                if component_id[w] == usize::MAX {
                    component_id[w] = id;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    ComponentPartition {
        component_id,
        sizes,
    }
}

/// Graph Laplacian L = K - A as a sparse matrix. L 1 = 0 by construction.
pub fn laplacian(g: &MolecularGraph) -> CsrMatrix {
    let n = g.n();
    let mut rows: Vec<Vec<(u32, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<(u32, f64)> = g.neighbors(i).iter().map(|&j| (j, -1.0)).collect();
        row.push((i as u32, g.degree(i) as f64));
        rows.push(row);
    }
    CsrMatrix::from_rows(n, rows)
}

/// Graph density 2m / (N(N-1)). Requires at least two nodes.
pub fn density(g: &MolecularGraph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Param(format!(
            "density undefined for {n} node(s), need at least 2"
        )));
    }
    Ok(2.0 * g.m() as f64 / (n as f64 * (n - 1) as f64))
}

/// Beta index m / N, the edges-per-node connectivity level.
pub fn beta_index(g: &MolecularGraph) -> Result<f64> {
    if g.n() == 0 {
        return Err(Error::Param("beta index undefined for empty node set".into()));
    }
    Ok(g.m() as f64 / g.n() as f64)
}

/// Internal and external density of a node subset.
///
/// internal = edges within the set / C(|set|, 2);
/// external = boundary edges / (|set| * (N - |set|)).
/// The set must contain at least 2 nodes and be a proper subset.
pub fn subgraph_densities(g: &MolecularGraph, node_set: &[usize]) -> Result<(f64, f64)> {
    let n = g.n();
    let s = node_set.len();
    if s < 2 {
        return Err(Error::Param(format!(
            "subgraph density undefined for {s} node(s)"
        )));
    }
    if s >= n {
        return Err(Error::Param(
            "subgraph density undefined for the full node set".into(),
        ));
    }
    let mut member = vec![false; n];
    for &v in node_set {
        if v >= n {
            return Err(Error::Param(format!("node {v} out of range")));
        }
        member[v] = true;
    }
    let mut internal = 0usize;
    let mut external = 0usize;
    for &(a, b) in g.edges() {
        match (member[a as usize], member[b as usize]) {
            (true, true) => internal += 1,
            (true, false) | (false, true) => external += 1,
            _ => {}
        }
    }
    let internal_possible = s * (s - 1) / 2;
    let external_possible = s * (n - s);
    Ok((
        internal as f64 / internal_possible as f64,
        external as f64 / external_possible as f64,
    ))
}
