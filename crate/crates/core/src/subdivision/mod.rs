//! Subdivision certificates, their verifier and an exhaustive finder.

mod certificate;
mod search;

pub use certificate::{
    CertificateJson, SubdivisionCertificate, VerificationReport, Violation, ViolationKind,
};
pub use search::{find_induced_subdivision, find_subdivision, FindOutcome, SearchMode};

use std::collections::{BTreeMap, VecDeque};

use crate::graph::Graph;

/// Checks `cert` against `host`. Malformed certificates (wrong branch length,
/// out-of-range vertices, missing paths) are errors; everything else is
/// reported through the flags and violation list.
pub fn verify(
    host: &Graph,
    cert: &SubdivisionCertificate,
) -> Result<VerificationReport, crate::CertificateError> {
    certificate::verify(host, cert)
}

/// The 1-subdivision of `h`: edge `i` of `h` (in [`Graph::edges`] order)
/// becomes the vertex `h.n() + i`, adjacent to both ends. Returns the graph
/// and the certificate of `h` in it.
pub fn one_subdivision(h: &Graph) -> (Graph, SubdivisionCertificate) {
    let n = h.n();
    let mut edges = Vec::with_capacity(2 * h.m());
    let mut paths = BTreeMap::new();
    for (i, (u, v)) in h.edges().enumerate() {
        edges.push((u, n + i));
        edges.push((n + i, v));
        paths.insert((u, v), vec![u, n + i, v]);
    }
    let g = Graph::from_edges(n + h.m(), edges).expect("1-subdivision is simple");
    let cert = SubdivisionCertificate {
        pattern: h.clone(),
        branch: (0..n).collect(),
        paths,
    };
    (g, cert)
}

/// A shortest `u`-`v` path in `host[allowed]`, smallest-index parents on
/// ties. Shortest paths have no chords inside `allowed`.
pub fn shortest_induced_path(
    host: &Graph,
    allowed: &[bool],
    u: usize,
    v: usize,
) -> Option<Vec<usize>> {
    assert!(allowed[u] && allowed[v], "path endpoints must be allowed");
    let mut parent = vec![usize::MAX; host.n()];
    parent[u] = u;
    let mut queue = VecDeque::from([u]);
    'bfs: while let Some(x) = queue.pop_front() {
        for &w in host.neighbors(x) {
            if allowed[w] && parent[w] == usize::MAX {
                parent[w] = x;
                if w == v {
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
    }
    if parent[v] == usize::MAX {
        return None;
    }
    let mut path = vec![v];
    while *path.last().unwrap() != u {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    debug_assert!(is_induced_path(host, &path));
    Some(path)
}

/// True if consecutive vertices are adjacent, no vertex repeats, and no
/// other pair of path vertices is adjacent.
pub fn is_induced_path(host: &Graph, path: &[usize]) -> bool {
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            if path[i] == path[j] || host.has_edge(path[i], path[j]) != (j == i + 1) {
                return false;
            }
        }
    }
    true
}

/// `K_k` as a pattern graph.
pub fn clique_pattern(k: usize) -> Graph {
    Graph::complete(k)
}
