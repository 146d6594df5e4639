//! Brute-force reference implementations for small graphs. Each one uses a
//! different method from the routine it checks (subset enumeration, path
//! enumeration) and is only meant for hosts of at most about 16 vertices.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::invariants::Girth;

const MAX_ORDER: usize = 20;

fn subsets(n: usize) -> impl Iterator<Item = u32> {
    assert!(
        n <= MAX_ORDER,
        "exhaustive oracles are limited to {MAX_ORDER} vertices"
    );
    0..(1u32 << n)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

fn degree_in(g: &Graph, v: usize, mask: u32) -> usize {
    g.neighbors(v)
        .iter()
        .filter(|&&w| mask >> w & 1 == 1)
        .count()
}

fn connected_within(g: &Graph, mask: u32) -> bool {
    let Some(start) = bits(mask).next() else {
        return true;
    };
    let mut seen = 1u32 << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == mask
}

/// Vertex sets of all induced cycles (chordless cycles, triangles included),
/// as bitmasks: connected sets of at least three vertices in which every
/// vertex has exactly two neighbors inside the set.
pub fn induced_cycle_sets(g: &Graph) -> Vec<u32> {
    subsets(g.n())
        .filter(|&m| m.count_ones() >= 3)
        .filter(|&m| bits(m).all(|v| degree_in(g, v, m) == 2) && connected_within(g, m))
        .collect()
}

pub fn has_induced_cycle(g: &Graph) -> bool {
    subsets(g.n()).any(|m| {
        m.count_ones() >= 3 && bits(m).all(|v| degree_in(g, v, m) == 2) && connected_within(g, m)
    })
}

/// Whether `g[mask]` is a subdivision of `K_k` for `k >= 4`: exactly `k`
/// vertices of degree `k - 1`, all others of degree 2, and the chains of
/// degree-2 vertices join every pair of branch vertices exactly once.
fn is_clique_subdivision(g: &Graph, mask: u32, k: usize) -> Option<Vec<usize>> {
    let mut branch = Vec::new();
    for v in bits(mask) {
        match degree_in(g, v, mask) {
            d if d == k - 1 => branch.push(v),
            2 => {}
            _ => return None,
        }
    }
    if branch.len() != k {
        return None;
    }
    let mut joined = vec![vec![false; k]; k];
    let mut covered = 0u32;
    for (i, &b) in branch.iter().enumerate() {
        covered |= 1 << b;
        for &first in g.neighbors(b) {
            if mask >> first & 1 == 0 {
                continue;
            }
            let (mut prev, mut cur) = (b, first);
            while branch.binary_search(&cur).is_err() {
                covered |= 1 << cur;
                let next = g
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&w| w != prev && mask >> w & 1 == 1)
                    .expect("degree-2 vertex has a second neighbor");
                prev = cur;
                cur = next;
            }
            let j = branch.binary_search(&cur).unwrap();
            if j == i {
                return None;
            }
            joined[i][j] = true;
        }
    }
    let all_pairs = (0..k).all(|i| (0..k).all(|j| i == j || joined[i][j]));
    (all_pairs && covered == mask).then_some(branch)
}

/// Vertex sets inducing a subdivision of `K_k` (`k >= 3`). For `k = 3`
/// these are the induced cycles. With `proper_only`, some choice of branch
/// vertices must be pairwise nonadjacent, which for a cycle means length
/// at least 6.
pub fn induced_clique_subdivision_sets(g: &Graph, k: usize, proper_only: bool) -> Vec<u32> {
    assert!(k >= 3);
    if k == 3 {
        return induced_cycle_sets(g)
            .into_iter()
            .filter(|m| !proper_only || m.count_ones() >= 6)
            .collect();
    }
    subsets(g.n())
        .filter(|m| m.count_ones() as usize >= k)
        .filter(|&m| match is_clique_subdivision(g, m, k) {
            None => false,
            Some(branch) => {
                !proper_only
                    || branch
                        .iter()
                        .enumerate()
                        .all(|(i, &a)| branch[i + 1..].iter().all(|&b| !g.has_edge(a, b)))
            }
        })
        .collect()
}

/// Smallest vertex set whose removal disconnects `g` or leaves a single
/// vertex, by enumerating subsets in order of size. Requires `n >= 2`.
pub fn min_vertex_cut_size(g: &Graph) -> usize {
    let n = g.n();
    assert!(n >= 2);
    let full: u32 = (1 << n) - 1;
    let mut best = n - 1;
    for s in subsets(n) {
        let size = s.count_ones() as usize;
        if size >= best || n - size < 2 {
            continue;
        }
        if !connected_within(g, full & !s) {
            best = size;
        }
    }
    best
}

/// Maximum over nonempty vertex subsets of the minimum degree inside them.
pub fn degeneracy(g: &Graph) -> usize {
    subsets(g.n())
        .filter(|&m| m != 0)
        .map(|m| bits(m).map(|v| degree_in(g, v, m)).min().unwrap())
        .max()
        .unwrap_or(0)
}

/// Shortest cycle as the minimum over edges `uv` of one plus the `u`-`v`
/// distance in `g - uv`.
pub fn girth(g: &Graph) -> Girth {
    let mut best: Option<usize> = None;
    for (u, v) in g.edges() {
        let mut dist = vec![usize::MAX; g.n()];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &w in g.neighbors(x) {
                if (x, w) == (u, v) || dist[w] != usize::MAX {
                    continue;
                }
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
        if dist[v] != usize::MAX {
            best = Some(best.map_or(dist[v] + 1, |b| b.min(dist[v] + 1)));
        }
    }
    best.map_or(Girth::Infinite, Girth::Finite)
}

fn simple_paths(g: &Graph, from: usize, to: usize, forbidden: u32, out: &mut Vec<u32>) {
    fn walk(g: &Graph, cur: usize, to: usize, used: u32, forbidden: u32, out: &mut Vec<u32>) {
        if cur == to {
            out.push(used);
            return;
        }
        for &w in g.neighbors(cur) {
            if used >> w & 1 == 0 && (forbidden >> w & 1 == 0 || w == to) {
                walk(g, w, to, used | 1 << w, forbidden, out);
            }
        }
    }
    walk(g, from, to, 1 << from, forbidden, out);
}

/// Whether one or two terminal pairs can be joined by vertex-disjoint
/// paths, by enumerating every simple path for the first pair and checking
/// the second pair's connectivity in what remains.
pub fn linkable(g: &Graph, pairs: &[(usize, usize)]) -> bool {
    assert!(
        !pairs.is_empty() && pairs.len() <= 2,
        "the linkage oracle handles one or two pairs"
    );
    let terminals: u32 = pairs.iter().fold(0, |acc, &(x, y)| acc | 1 << x | 1 << y);
    let (x, y) = pairs[0];
    let mut first = Vec::new();
    simple_paths(g, x, y, terminals & !(1 << y), &mut first);
    if pairs.len() == 1 {
        return !first.is_empty();
    }
    let (x2, y2) = pairs[1];
    first.iter().any(|&used| {
        let mut second = Vec::new();
        simple_paths(g, x2, y2, used, &mut second);
        !second.is_empty()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_facts() {
        assert_eq!(min_vertex_cut_size(&Graph::petersen()), 3);
        assert_eq!(min_vertex_cut_size(&Graph::complete(5)), 4);
        assert_eq!(degeneracy(&Graph::petersen()), 3);
        assert_eq!(girth(&Graph::petersen()), Girth::Finite(5));
        assert_eq!(girth(&Graph::star(4)), Girth::Infinite);
        assert!(has_induced_cycle(&Graph::cycle(7)));
        assert!(!has_induced_cycle(&Graph::star(5)));
        assert!(!linkable(&Graph::cycle(4), &[(0, 2), (1, 3)]));
        assert!(linkable(&Graph::complete(6), &[(0, 1), (2, 3)]));
    }

    #[test]
    fn petersen_k4_subdivisions() {
        let g = Graph::petersen();
        assert_eq!(induced_clique_subdivision_sets(&g, 4, false).len(), 15);
        assert!(induced_clique_subdivision_sets(&g, 4, true).is_empty());
    }

    #[test]
    fn cycle_proper_triangle_needs_length_six() {
        assert!(induced_clique_subdivision_sets(&Graph::cycle(5), 3, true).is_empty());
        assert_eq!(
            induced_clique_subdivision_sets(&Graph::cycle(6), 3, true).len(),
            1
        );
    }
}
