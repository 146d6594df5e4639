//! Elementary invariants: girth, degeneracy, greedy colouring, dense cores,
//! the Moore-type order bound and nearest-root BFS forests.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::graph::Graph;

/// Length of a shortest cycle. Forests have infinite girth, which orders
/// after every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    /// `self >= bound`, treating infinity as larger than everything.
    pub fn at_least(self, bound: u64) -> bool {
        match self {
            Girth::Finite(g) => g as u64 >= bound,
            Girth::Infinite => true,
        }
    }
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "infinity"),
        }
    }
}

/// Exact girth by one truncated BFS per vertex.
pub fn girth(g: &Graph) -> Girth {
    match shortest_cycle(g) {
        Some(c) => Girth::Finite(c.len()),
        None => Girth::Infinite,
    }
}

/// A shortest cycle as a vertex sequence (the closing edge is implicit).
pub fn shortest_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut best: Option<(usize, usize, usize, usize)> = None; // (len, root, u, w)
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for r in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        dist[r] = 0;
        touched.push(r);
        let mut queue = VecDeque::from([r]);
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some((len, ..)) = best {
                if 2 * dist[u] + 1 >= len {
                    break 'bfs;
                }
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|(b, ..)| len < b) {
                        best = Some((len, r, u, w));
                    }
                }
            }
        }
    }
    let (_, r, u, w) = best?;
    // Rebuild the walk r..u w..r from the winning BFS and trim the shared
    // prefix; the result is a cycle of length exactly the girth.
    let tree = bfs_parents(g, r);
    let climb = |mut v: usize| {
        let mut path = vec![v];
        while v != r {
            v = tree[v];
            path.push(v);
        }
        path.reverse();
        path
    };
    let pu = climb(u);
    let pw = climb(w);
    let mut common = 0;
    while common < pu.len().min(pw.len()) && pu[common] == pw[common] {
        common += 1;
    }
    let mut cycle: Vec<usize> = pu[common - 1..].to_vec();
    cycle.extend(pw[common..].iter().rev());
    Some(cycle)
}

fn bfs_parents(g: &Graph, r: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[r] = r;
    let mut queue = VecDeque::from([r]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Length of a shortest cycle through `v`, if any.
pub fn local_girth(g: &Graph, v: usize) -> Option<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut branch = vec![usize::MAX; n];
    dist[v] = 0;
    let mut queue = VecDeque::new();
    for &w in g.neighbors(v) {
        dist[w] = 1;
        branch[w] = w;
        queue.push_back(w);
    }
    let mut best: Option<usize> = None;
    while let Some(u) = queue.pop_front() {
        if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
            break;
        }
        for &w in g.neighbors(u) {
            if w == v {
                continue;
            }
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                branch[w] = branch[u];
                queue.push_back(w);
            } else if branch[w] != branch[u] {
                let len = dist[u] + dist[w] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

/// A min-degree peeling order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyOrder {
    /// Vertices in the order they were peeled.
    pub order: Vec<usize>,
    /// Largest degree seen at peeling time.
    pub degeneracy: usize,
    /// Per vertex: neighbors that come later in `order`.
    pub right_degree: Vec<usize>,
    /// Per vertex: index into `order`.
    pub position: Vec<usize>,
}

impl DegeneracyOrder {
    /// Neighbors of `v` that come later in the order.
    pub fn right_neighbors<'a>(
        &'a self,
        g: &'a Graph,
        v: usize,
    ) -> impl Iterator<Item = usize> + 'a {
        let pv = self.position[v];
        g.neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| self.position[w] > pv)
    }
}

/// Repeatedly removes a vertex of minimum current degree (smallest index
/// on ties).
pub fn degeneracy_order(g: &Graph) -> DegeneracyOrder {
    let n = g.n();
    let mut deg = g.degrees();
    let mut alive = vec![true; n];
    let mut heap: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    let mut right_degree = vec![0; n];
    let mut position = vec![0; n];
    let mut degeneracy = 0;
    while let Some((d, v)) = heap.pop_first() {
        alive[v] = false;
        position[v] = order.len();
        order.push(v);
        right_degree[v] = d;
        degeneracy = degeneracy.max(d);
        for &w in g.neighbors(v) {
            if alive[w] {
                heap.remove(&(deg[w], w));
                deg[w] -= 1;
                heap.insert((deg[w], w));
            }
        }
    }
    DegeneracyOrder {
        order,
        degeneracy,
        right_degree,
        position,
    }
}

/// Greedy colouring in reverse peeling order: each vertex gets the smallest
/// colour not used by an already coloured neighbor. Uses at most
/// `degeneracy + 1` colours.
pub fn greedy_color(g: &Graph, ord: &DegeneracyOrder) -> Vec<usize> {
    assert_eq!(
        ord.order.len(),
        g.n(),
        "order does not belong to this graph"
    );
    let mut color = vec![usize::MAX; g.n()];
    let mut used = Vec::new();
    for &v in ord.order.iter().rev() {
        used.clear();
        used.resize(g.degree(v) + 1, false);
        for &w in g.neighbors(v) {
            if color[w] < used.len() {
                used[color[w]] = true;
            }
        }
        color[v] = used.iter().position(|&b| !b).unwrap();
    }
    color
}

/// Number of distinct colours in a colouring.
pub fn color_count(coloring: &[usize]) -> usize {
    coloring.iter().copied().max().map_or(0, |c| c + 1)
}

pub fn is_proper_coloring(g: &Graph, coloring: &[usize]) -> bool {
    g.edges().all(|(u, v)| coloring[u] != coloring[v])
}

/// Vertices that survive repeatedly deleting vertices of degree `< k`.
pub fn k_core(g: &Graph, k: usize) -> Vec<usize> {
    let n = g.n();
    let mut deg = g.degrees();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] < k).collect();
    for &v in &stack {
        alive[v] = false;
    }
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] < k {
                    alive[w] = false;
                    stack.push(w);
                }
            }
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Deletes vertices of degree at most `d` until none remain. A nonempty
/// survivor set has minimum degree at least `d + 1`; an empty one certifies
/// that `g` is `d`-degenerate and hence has average degree at most `2d`.
pub fn avg_core(g: &Graph, d: usize) -> Option<Vec<usize>> {
    let core = k_core(g, d + 1);
    if core.is_empty() {
        None
    } else {
        Some(core)
    }
}

/// `2 * sum_{i=0..=m} (delta - 1)^i`, the least order of a graph with
/// minimum degree `delta` and girth at least `2m + 2`.
pub fn moore_lower_bound(delta: u64, m: u64) -> Result<BigUint, DomainError> {
    if delta < 2 {
        return Err(DomainError(format!(
            "moore bound needs delta >= 2, got {delta}"
        )));
    }
    let base = delta - 1;
    let sum = if base == 1 {
        BigUint::from(m + 1)
    } else {
        let exp =
            u32::try_from(m + 1).map_err(|_| DomainError(format!("exponent {m} too large")))?;
        (BigUint::from(base).pow(exp) - BigUint::one()) / BigUint::from(base - 1)
    };
    Ok(sum * 2u32)
}

/// Decimal digit count of a big integer without formatting it.
pub fn decimal_digits(x: &BigUint) -> u64 {
    if x.is_zero() {
        return 1;
    }
    // log10(2) bracket gives an estimate that is off by at most one.
    let est = ((x.bits() - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64 + 1;
    let ten = BigUint::from(10u32);
    let lower = ten.pow((est - 1) as u32);
    if *x < lower {
        est - 1
    } else if *x >= &lower * &ten {
        est + 1
    } else {
        est
    }
}

/// Nearest-root breadth-first forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsForest {
    /// Assigned root per vertex; `None` for vertices in root-free components.
    pub root: Vec<Option<usize>>,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<Option<usize>>,
}

impl BfsForest {
    /// Tree path from `v` up to its root (inclusive on both ends).
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Vertices assigned to `root`, ascending.
    pub fn tree(&self, root: usize) -> Vec<usize> {
        (0..self.root.len())
            .filter(|&v| self.root[v] == Some(root))
            .collect()
    }

    pub fn unassigned(&self) -> Vec<usize> {
        (0..self.root.len())
            .filter(|&v| self.root[v].is_none())
            .collect()
    }
}

/// Multi-source BFS assigning every reachable vertex to a nearest root.
/// Ties go to the smallest root index, then the smallest parent index.
pub fn bfs_forest(g: &Graph, roots: &[usize]) -> Result<BfsForest, DomainError> {
    if roots.is_empty() {
        return Err(DomainError("bfs_forest needs at least one root".into()));
    }
    let n = g.n();
    let mut root = vec![None; n];
    let mut parent = vec![None; n];
    let mut depth = vec![None; n];
    let mut frontier: Vec<usize> = roots.to_vec();
    frontier.sort_unstable();
    frontier.dedup();
    for &r in &frontier {
        root[r] = Some(r);
        depth[r] = Some(0);
    }
    let mut best: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); n];
    let mut level = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            let key = (root[u].unwrap(), u);
            for &w in g.neighbors(u) {
                if depth[w].is_some() {
                    continue;
                }
                if best[w].0 == usize::MAX {
                    next.push(w);
                }
                if key < best[w] {
                    best[w] = key;
                }
            }
        }
        level += 1;
        for &w in &next {
            let (r, p) = best[w];
            root[w] = Some(r);
            parent[w] = Some(p);
            depth[w] = Some(level);
        }
        next.sort_unstable();
        frontier = next;
    }
    Ok(BfsForest {
        root,
        parent,
        depth,
    })
}
