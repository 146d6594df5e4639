//! Instances with a known structure planted in them.
//!
//! Each generator records where the structure sits, so tests can check
//! recovery against the construction instead of against another solver.

use std::collections::BTreeSet;

use rand::seq::index::sample;

use crate::error::DomainError;
use crate::extremal::{high_girth_regular, RegularOutcome};
use crate::graph::Graph;
use crate::rng::stage_rng;

/// Edge swaps allowed when generating padding.
const PADDING_SWAPS: u64 = 2_000_000;

/// Hubs and the vertices wired through pairs of them.
#[derive(Clone, Debug)]
pub struct HubInstance {
    pub graph: Graph,
    /// High-degree vertices, `0..h`.
    pub hubs: Vec<usize>,
    /// One vertex per pair of hubs, adjacent to exactly that pair.
    pub wired: Vec<usize>,
}

/// The 1-subdivision of `K_h`: hubs `0..h`, then one vertex per hub pair in
/// lexicographic order. Girth 6 for `h >= 3`.
pub fn hub_graph(h: usize) -> HubInstance {
    let mut edges = Vec::new();
    let mut next = h;
    for u in 0..h {
        for v in u + 1..h {
            edges.extend([(u, next), (v, next)]);
            next += 1;
        }
    }
    HubInstance {
        graph: Graph::from_edges(next, edges).expect("subdivision edges are distinct"),
        hubs: (0..h).collect(),
        wired: (h..next).collect(),
    }
}

/// [`hub_graph`] with every wired vertex raised to degree 4.
///
/// The padding is a 4-regular graph of girth at least 5 on the vertices
/// after the wired ones. Each wired vertex is joined to two fresh padding
/// vertices at padding distance at least 3, so the result has minimum
/// degree 4, degeneracy 4 and girth at least 5, and the hubs keep degree
/// `h - 1`.
pub fn padded_hub_graph(h: usize, seed: u64) -> Result<HubInstance, DomainError> {
    let base = hub_graph(h);
    let wired = base.wired.len();
    let pad_n = (2 * wired + wired / 2).max(20);
    let padding = match high_girth_regular(4, pad_n, 5, seed, PADDING_SWAPS)? {
        RegularOutcome::Found(p) => p,
        other => {
            return Err(DomainError(format!(
                "no padding graph of girth 5 on {pad_n} vertices: {other:?}"
            )))
        }
    };
    let offset = base.graph.n();
    let mut edges: Vec<(usize, usize)> = base.graph.edges().collect();
    edges.extend(padding.edges().map(|(u, v)| (u + offset, v + offset)));
    let mut used = vec![false; pad_n];
    for &a in &base.wired {
        let first = (0..pad_n)
            .find(|&p| !used[p])
            .ok_or_else(|| DomainError("padding exhausted".into()))?;
        used[first] = true;
        let dist = padding.distances_from(first);
        let second = (0..pad_n)
            .find(|&p| !used[p] && dist[p].is_none_or(|d| d >= 3))
            .ok_or_else(|| DomainError(format!("no padding vertex far from {first}")))?;
        used[second] = true;
        edges.extend([(a, first + offset), (a, second + offset)]);
    }
    Ok(HubInstance {
        graph: Graph::from_edges(offset + pad_n, edges).expect("padding edges are distinct"),
        hubs: base.hubs,
        wired: base.wired,
    })
}

/// A graph with every vertex of `h0` blown up into a tree.
#[derive(Clone, Debug)]
pub struct TreeBlowup {
    pub graph: Graph,
    /// The vertices of `h0`, `0..h0.n()`.
    pub hubs: Vec<usize>,
}

/// Replaces each vertex `y` of `h0` by a tree: `y` has `arms` children and
/// each neighbor `y'` of `y` gets a leaf `x_{y y'}` under arm `i % arms`,
/// where `y'` is the `i`-th neighbor. The leaves `x_{y y'}` and `x_{y' y}`
/// are joined by a path of length `bridge`, so every edge of `h0` becomes a
/// path of length `4 + bridge` between hubs. A cycle of `h0` of length `t`
/// becomes one of length between `t (2 + bridge)` and `t (4 + bridge)`.
pub fn tree_blowup(h0: &Graph, arms: usize, bridge: usize) -> TreeBlowup {
    assert!(arms >= 1 && bridge >= 1);
    let n0 = h0.n();
    let mut next = n0;
    let mut edges = Vec::new();
    let mut arm_of = Vec::with_capacity(n0);
    for y in 0..n0 {
        let first = next;
        for _ in 0..arms {
            edges.push((y, next));
            next += 1;
        }
        arm_of.push(first);
    }
    let mut leaf = std::collections::BTreeMap::new();
    for (y, &first_arm) in arm_of.iter().enumerate() {
        for (i, &w) in h0.neighbors(y).iter().enumerate() {
            edges.push((first_arm + i % arms, next));
            leaf.insert((y, w), next);
            next += 1;
        }
    }
    for (u, v) in h0.edges() {
        let mut prev = leaf[&(u, v)];
        for _ in 1..bridge {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, leaf[&(v, u)]));
    }
    TreeBlowup {
        graph: Graph::from_edges(next, edges).expect("blowup edges are distinct"),
        hubs: (0..n0).collect(),
    }
}

/// A long cycle whose vertices each see exactly one hub, with extra
/// vertices each joined to `width` cycle vertices of distinct hubs.
#[derive(Clone, Debug)]
pub struct CycleInstance {
    pub graph: Graph,
    /// The cycle, `0..blocks * width`.
    pub cycle: Vec<usize>,
    /// One vertex per block, after the cycle.
    pub blocks: Vec<usize>,
    /// After the blocks.
    pub hubs: Vec<usize>,
}

/// Cycle `x_0 .. x_{N-1}` with `N = blocks * width`; `x_i` sees hub
/// `(i + i / blocks) % hubs` and block `i % blocks`. Cycle vertices have
/// degree 4 and block vertices degree `width`, so the degeneracy is 4 and
/// almost every vertex has exactly one hub neighbor. Fails unless the
/// result has girth at least 5.
pub fn hub_cycle(hubs: usize, blocks: usize, width: usize) -> Result<CycleInstance, DomainError> {
    if hubs < width || blocks < 3 || width < 2 {
        return Err(DomainError(format!(
            "need hubs >= width >= 2 and blocks >= 3, got {hubs}, {blocks}, {width}"
        )));
    }
    let len = blocks * width;
    let hub_of = |i: usize| len + blocks + (i + i / blocks) % hubs;
    let mut edges = Vec::with_capacity(3 * len);
    for i in 0..len {
        edges.push((i, (i + 1) % len));
        edges.push((i, hub_of(i)));
        edges.push((i, len + i % blocks));
    }
    let graph =
        Graph::from_edges(len + blocks + hubs, edges).map_err(|e| DomainError(e.to_string()))?;
    let shortest = crate::invariants::girth(&graph);
    if !shortest.at_least(5) {
        return Err(DomainError(format!("parameters give girth {shortest}")));
    }
    Ok(CycleInstance {
        graph,
        cycle: (0..len).collect(),
        blocks: (len..len + blocks).collect(),
        hubs: (len + blocks..len + blocks + hubs).collect(),
    })
}

/// A bipartite attachment of `X` to `B0`.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub graph: Graph,
    /// `0..nx`.
    pub x: Vec<usize>,
    /// `nx..nx + nb`.
    pub b0: Vec<usize>,
}

/// Joins each of `nx` vertices to `deg` vertices of `B0` so that no two
/// share a pair of `B0`-neighbors. The result is bipartite with girth at
/// least 6 and degeneracy at most `deg`.
pub fn linear_attachment(
    nx: usize,
    nb: usize,
    deg: usize,
    seed: u64,
) -> Result<Attachment, DomainError> {
    if deg > nb || deg < 2 {
        return Err(DomainError(format!(
            "need 2 <= deg <= nb, got deg = {deg}, nb = {nb}"
        )));
    }
    let mut rng = stage_rng(seed, "linear-attachment", 0);
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut edges = Vec::with_capacity(nx * deg);
    for x in 0..nx {
        let mut placed = false;
        for _ in 0..10_000 {
            let mut pick: Vec<usize> = sample(&mut rng, nb, deg).into_vec();
            pick.sort_unstable();
            let new: Vec<(usize, usize)> = pick
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| pick[i + 1..].iter().map(move |&b| (a, b)))
                .collect();
            if new.iter().all(|p| !pairs.contains(p)) {
                pairs.extend(new);
                edges.extend(pick.iter().map(|&b| (x, nx + b)));
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(DomainError(format!("could not place vertex {x} of {nx}")));
        }
    }
    Ok(Attachment {
        graph: Graph::from_edges(nx + nb, edges).expect("attachment edges are distinct"),
        x: (0..nx).collect(),
        b0: (nx..nx + nb).collect(),
    })
}
