//! Simple undirected graphs on dense vertex indices.
//!
//! [`Graph`] is immutable once built. Every constructor validates the
//! adjacency invariants (no loops, no parallel edges, symmetric, indices in
//! range), so the rest of the crate can rely on them without re-checking.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::invariants::{girth, Girth};

/// A simple undirected graph with vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicate edges
    /// (in either orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
        }
        Ok(Graph { adj, m })
    }

    /// Like [`Graph::from_edges`] but silently drops loops and repeated
    /// edges. Used by generators that build graphs from unions of paths.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut m2 = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Graph { adj, m: m2 / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).max()
    }

    /// Average degree `2m/n` as an exact fraction; `None` for the null graph.
    pub fn average_degree(&self) -> Option<Ratio<u64>> {
        if self.n() == 0 {
            None
        } else {
            Some(Ratio::new(2 * self.m as u64, self.n() as u64))
        }
    }

    /// Number of neighbors of `v` inside the set described by `mask`.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&w| mask[w]).count()
    }

    /// Number of edges with both ends in the set described by `mask`.
    pub fn edges_within(&self, mask: &[bool]) -> usize {
        self.edges().filter(|&(u, v)| mask[u] && mask[v]).count()
    }

    /// The subgraph induced by `vertices`, relabelled to `0..k` in the order
    /// given (duplicates are ignored after their first occurrence).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> InducedSubgraph {
        let mut local = vec![usize::MAX; self.n()];
        let mut host_of = Vec::with_capacity(vertices.len());
        for &v in vertices {
            if local[v] == usize::MAX {
                local[v] = host_of.len();
                host_of.push(v);
            }
        }
        let mut adj = vec![Vec::new(); host_of.len()];
        let mut m2 = 0;
        for (i, &v) in host_of.iter().enumerate() {
            for &w in &self.adj[v] {
                if local[w] != usize::MAX {
                    adj[i].push(local[w]);
                }
            }
            adj[i].sort_unstable();
            m2 += adj[i].len();
        }
        InducedSubgraph {
            graph: Graph { adj, m: m2 / 2 },
            host_of,
        }
    }

    /// `G - removed`, relabelled in ascending order of surviving vertices.
    pub fn without_vertices(&self, removed: &[usize]) -> InducedSubgraph {
        let mut keep = vec![true; self.n()];
        for &v in removed {
            keep[v] = false;
        }
        let kept: Vec<usize> = (0..self.n()).filter(|&v| keep[v]).collect();
        self.induced_subgraph(&kept)
    }

    /// A copy with the given extra edges; errors like [`Graph::from_edges`].
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Graph::from_edges(self.n(), self.edges().chain(extra.iter().copied()))
    }

    /// A copy with `k` extra isolated vertices appended.
    pub fn with_isolated(&self, k: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj.extend(std::iter::repeat_with(Vec::new).take(k));
        Graph { adj, m: self.m }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("a permutation preserves simplicity")
    }

    /// Breadth-first distances from `source`; `None` marks unreachable
    /// vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Host distance between `u` and `v`, `None` when they lie in different
    /// components.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances_from(u)[v]
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Two-colours the graph if it is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &self.adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// True if `set` induces no edge.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        let mask = mask_of(self.n(), set);
        set.iter().all(|&v| self.adj[v].iter().all(|&w| !mask[w]))
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n: self.n(),
            m: self.m(),
            min_degree: self.min_degree(),
            max_degree: self.max_degree(),
            average_degree: self.average_degree(),
            girth: girth(self),
            component_count: self.components().len(),
        }
    }

    // Named graphs.

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// The star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    /// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i+5`.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    /// Disjoint union, vertices of later parts shifted past earlier ones.
    pub fn disjoint_union(parts: &[Graph]) -> Graph {
        let mut offset = 0;
        let mut edges = Vec::new();
        for g in parts {
            edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
            offset += g.n();
        }
        Graph::from_edges(offset, edges).unwrap()
    }
}

/// An induced subgraph together with its embedding into the host.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `host_of[i]` is the host vertex behind local vertex `i`.
    pub host_of: Vec<usize>,
}

impl InducedSubgraph {
    pub fn to_host(&self, local: usize) -> usize {
        self.host_of[local]
    }

    pub fn map_to_host(&self, locals: &[usize]) -> Vec<usize> {
        locals.iter().map(|&v| self.host_of[v]).collect()
    }

    /// Host index -> local index (`None` if not part of the subgraph).
    pub fn local_index(&self, host_n: usize) -> Vec<Option<usize>> {
        let mut idx = vec![None; host_n];
        for (i, &v) in self.host_of.iter().enumerate() {
            idx[v] = Some(i);
        }
        idx
    }
}

/// Summary invariants used throughout: `δ`, `Δ`, `d(G)`, `g(G)` and the
/// number of components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub min_degree: Option<usize>,
    pub max_degree: Option<usize>,
    pub average_degree: Option<Ratio<u64>>,
    pub girth: Girth,
    pub component_count: usize,
}

/// Membership mask of `set` over `0..n`.
pub fn mask_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

/// Sorted members of a mask.
pub fn members(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}
