//! Vertex connectivity, disjoint-path linkage and extraction of highly
//! connected induced blocks with small boundary.

mod blocks;
mod linkage;

pub use blocks::{
    block_decomposition, boundary_of, extract_block, Block, BlockDecomposition, DecompositionStep,
};
pub use linkage::{
    is_valid_linkage, solve_linkage, LinkageInstance, LinkageInstanceJson, LinkageJsonError,
    LinkageOutcome,
};

use std::collections::VecDeque;

use crate::error::DomainError;
use crate::graph::Graph;

/// Unit vertex-capacity flow network on the split digraph of a graph:
/// vertex `v` becomes `v_in = 2v -> v_out = 2v + 1`.
struct SplitNetwork {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    next: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl SplitNetwork {
    fn new(g: &Graph, s: usize, t: usize) -> Self {
        let nodes = 2 * g.n();
        let mut net = SplitNetwork {
            head: vec![NIL; nodes],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
        };
        let big = g.n() as u32 + 1;
        for v in 0..g.n() {
            let c = if v == s || v == t { big } else { 1 };
            net.arc(2 * v, 2 * v + 1, c);
        }
        for (u, v) in g.edges() {
            net.arc(2 * u + 1, 2 * v, big);
            net.arc(2 * v + 1, 2 * u, big);
        }
        net
    }

    fn arc(&mut self, from: usize, to: usize, cap: u32) {
        for (a, b, c) in [(from, to, cap), (to, from, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    /// Augments one unit along a shortest residual path; false if none.
    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut via = vec![NIL; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    via[w] = e;
                    if w == sink {
                        let mut cur = sink;
                        while cur != source {
                            let e = via[cur];
                            self.cap[e] -= 1;
                            self.cap[e ^ 1] += 1;
                            cur = self.to[e ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(w);
                }
                e = self.next[e];
            }
        }
        false
    }

    fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[source] = true;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            let mut e = self.head[u];
            while e != NIL {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
                e = self.next[e];
            }
        }
        seen
    }
}

/// Maximum number of internally disjoint `s`-`t` paths, capped at `limit`,
/// together with a separator of that size when the cap was not reached.
/// `s` and `t` must be distinct and nonadjacent.
pub fn local_vertex_connectivity(
    g: &Graph,
    s: usize,
    t: usize,
    limit: usize,
) -> (usize, Option<Vec<usize>>) {
    assert!(
        s != t && !g.has_edge(s, t),
        "local connectivity needs distinct nonadjacent vertices"
    );
    let mut net = SplitNetwork::new(g, s, t);
    let (source, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < limit && net.augment(source, sink) {
        flow += 1;
    }
    if flow >= limit {
        return (flow, None);
    }
    let seen = net.reachable(source);
    let cut = (0..g.n())
        .filter(|&v| v != s && v != t && seen[2 * v] && !seen[2 * v + 1])
        .collect();
    (flow, Some(cut))
}

/// Vertex connectivity and a minimum separator (`None` for complete graphs,
/// whose connectivity is `n - 1` by convention).
pub fn connectivity_with_cut(g: &Graph) -> Result<(usize, Option<Vec<usize>>), DomainError> {
    let n = g.n();
    if n < 2 {
        return Err(DomainError(format!(
            "vertex connectivity needs n >= 2, got {n}"
        )));
    }
    let comps = g.components();
    if comps.len() > 1 {
        return Ok((0, Some(Vec::new())));
    }
    let mut best = n - 1;
    let mut best_cut = None;
    // A minimum separator misses one of any best + 1 vertices, and that
    // vertex is nonadjacent to something on the far side of the cut.
    let mut i = 0;
    while i < n && i <= best {
        for w in 0..n {
            if w == i || g.has_edge(i, w) {
                continue;
            }
            let (k, cut) = local_vertex_connectivity(g, i, w, best);
            if k < best {
                best = k;
                best_cut = cut;
            }
        }
        i += 1;
    }
    Ok((best, best_cut))
}

/// Exact vertex connectivity `κ(G)` via unit-capacity max flow (Menger).
pub fn vertex_connectivity(g: &Graph) -> Result<usize, DomainError> {
    connectivity_with_cut(g).map(|(k, _)| k)
}

/// A separator of size `< k`, if one exists (the empty set when `g` is
/// disconnected). Graphs on at most `k` vertices without such a separator
/// return `None` too; callers check the order separately.
pub fn small_separator(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 2 || k == 0 {
        return None;
    }
    if !g.is_connected() {
        return Some(Vec::new());
    }
    // Any separator of size < k misses one of the first k vertices.
    for s in 0..k.min(n) {
        for t in 0..n {
            if t == s || g.has_edge(s, t) {
                continue;
            }
            if let (_, Some(cut)) = local_vertex_connectivity(g, s, t, k) {
                return Some(cut);
            }
        }
    }
    None
}

/// True if `g` has more than `k` vertices and no separator of size `< k`
/// (for `k = 0` every graph qualifies).
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    g.n() > k && small_separator(g, k).is_none()
}
