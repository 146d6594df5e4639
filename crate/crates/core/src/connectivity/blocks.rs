use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::small_separator;
use crate::graph::{mask_of, Graph};
use crate::invariants::k_core;

/// An induced subgraph verified to be `connectivity_witness`-connected.
/// Vertex lists are sorted host indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub vertices: Vec<usize>,
    /// Members of `vertices` with a neighbor outside the block.
    pub boundary: Vec<usize>,
    pub connectivity_witness: usize,
}

/// Members of `set` with a neighbor outside it.
pub fn boundary_of(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mask = mask_of(g.n(), set);
    let mut out: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|&w| !mask[w]))
        .collect();
    out.sort_unstable();
    out
}

/// Vertices of `set` surviving the `k`-core peel of `g[set]`, split into
/// connected components (host indices, each sorted).
fn core_components(g: &Graph, set: &[usize], k: usize) -> Vec<Vec<usize>> {
    let sub = g.induced_subgraph(set);
    let core = k_core(&sub.graph, k);
    let inner = sub.graph.induced_subgraph(&core);
    inner
        .graph
        .components()
        .into_iter()
        .map(|c| {
            let mut hosts: Vec<usize> = c.iter().map(|&v| sub.to_host(inner.to_host(v))).collect();
            hosts.sort_unstable();
            hosts
        })
        .collect()
}

/// Searches for an induced `q`-connected subgraph on more than `4q²`
/// vertices whose boundary in `g` has at most `boundary_cap` vertices.
///
/// Peels to the `4q²`-core, then repeatedly splits candidates at separators
/// of size `< q`, keeping each side together with the separator. Candidates
/// are processed largest first. `None` does not prove that no block exists.
pub fn extract_block(g: &Graph, q: usize, boundary_cap: usize) -> Option<Block> {
    let min_degree = 4 * q * q;
    let mut heap: BinaryHeap<(usize, Reverse<Vec<usize>>)> = BinaryHeap::new();
    let all: Vec<usize> = (0..g.n()).collect();
    for c in core_components(g, &all, min_degree) {
        heap.push((c.len(), Reverse(c)));
    }
    while let Some((size, Reverse(candidate))) = heap.pop() {
        if size <= min_degree {
            break;
        }
        let sub = g.induced_subgraph(&candidate);
        match small_separator(&sub.graph, q) {
            None => {
                let boundary = boundary_of(g, &candidate);
                if boundary.len() <= boundary_cap {
                    return Some(Block {
                        vertices: candidate,
                        boundary,
                        connectivity_witness: q,
                    });
                }
            }
            Some(cut) => {
                let rest = sub.graph.without_vertices(&cut);
                let cut_hosts = sub.map_to_host(&cut);
                for comp in rest.graph.components() {
                    let mut piece: Vec<usize> =
                        comp.iter().map(|&v| sub.to_host(rest.to_host(v))).collect();
                    piece.extend_from_slice(&cut_hosts);
                    for c in core_components(g, &piece, min_degree) {
                        heap.push((c.len(), Reverse(c)));
                    }
                }
            }
        }
    }
    None
}

/// One round of the decomposition: a block and the vertices peeled after
/// deleting it, in deletion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStep {
    pub block: Block,
    pub peeled: Vec<usize>,
}

/// Marks a vertex deleted, failing if it already was.
type Deleter<'a> = dyn FnMut(&mut [bool], usize) -> Result<(), String> + 'a;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Degree threshold `T`: every peeled vertex had fewer than `T`
    /// neighbors in the residual graph when it was deleted.
    pub threshold: usize,
    /// Vertices peeled before the first block, in deletion order.
    pub initial_peel: Vec<usize>,
    pub steps: Vec<DecompositionStep>,
    /// False when a block extraction failed on a nonempty residual.
    pub complete: bool,
    /// Vertices left when the decomposition stopped (empty when complete).
    pub residual: Vec<usize>,
}

/// Deletes vertices of residual degree `< threshold` until none remain,
/// returning them in deletion order.
fn peel(g: &Graph, alive: &mut [bool], threshold: usize) -> Vec<usize> {
    let mut deg: Vec<usize> = (0..g.n())
        .map(|v| if alive[v] { g.degree_into(v, alive) } else { 0 })
        .collect();
    let mut order = Vec::new();
    let mut queue: Vec<usize> = (0..g.n())
        .rev()
        .filter(|&v| alive[v] && deg[v] < threshold)
        .collect();
    let mut queued = vec![false; g.n()];
    for &v in &queue {
        queued[v] = true;
    }
    while let Some(v) = queue.pop() {
        alive[v] = false;
        order.push(v);
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] < threshold && !queued[w] {
                    queued[w] = true;
                    queue.push(w);
                }
            }
        }
    }
    order
}

/// Splits `g` into disjoint `k`-connected blocks with boundary at most `2k²`
/// and peeled sets, with threshold `T = 4k²`.
///
/// While the residual graph is nonempty: peel vertices of degree `< T`, then
/// extract a block from what is left and delete it.
pub fn block_decomposition(g: &Graph, k: usize) -> BlockDecomposition {
    let threshold = 4 * k * k;
    let cap = 2 * k * k;
    let mut alive = vec![true; g.n()];
    let initial_peel = peel(g, &mut alive, threshold);
    let mut steps = Vec::new();
    let mut complete = true;
    loop {
        let residual: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
        if residual.is_empty() {
            break;
        }
        let sub = g.induced_subgraph(&residual);
        let Some(local) = extract_block(&sub.graph, k, cap) else {
            complete = false;
            break;
        };
        let block = Block {
            vertices: sub.map_to_host(&local.vertices),
            boundary: sub.map_to_host(&local.boundary),
            connectivity_witness: local.connectivity_witness,
        };
        for &v in &block.vertices {
            alive[v] = false;
        }
        let peeled = peel(g, &mut alive, threshold);
        steps.push(DecompositionStep { block, peeled });
    }
    BlockDecomposition {
        threshold,
        initial_peel,
        steps,
        complete,
        residual: (0..g.n()).filter(|&v| alive[v]).collect(),
    }
}

impl BlockDecomposition {
    /// Replays the deletions against `g`: every vertex appears exactly once,
    /// every peeled vertex had residual degree below the threshold when it
    /// was deleted, and each block's boundary matches the residual graph it
    /// was taken from.
    pub fn replay_check(&self, g: &Graph) -> Result<(), String> {
        let mut alive = vec![true; g.n()];
        let mut delete = |alive: &mut [bool], v: usize| -> Result<(), String> {
            if v >= g.n() || !alive[v] {
                return Err(format!("vertex {v} deleted twice or out of range"));
            }
            alive[v] = false;
            Ok(())
        };
        let check_peel =
            |alive: &mut [bool], order: &[usize], delete: &mut Deleter<'_>| {
                for &v in order {
                    if v < g.n() && alive[v] && g.degree_into(v, alive) >= self.threshold {
                        return Err(format!(
                            "vertex {v} had degree >= {} when peeled",
                            self.threshold
                        ));
                    }
                    delete(alive, v)?;
                }
                Ok(())
            };
        check_peel(&mut alive, &self.initial_peel, &mut delete)?;
        for (t, step) in self.steps.iter().enumerate() {
            let residual: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
            if step.block.vertices.iter().any(|&v| v >= g.n() || !alive[v]) {
                return Err(format!("block {t} uses a deleted vertex"));
            }
            let sub = g.induced_subgraph(&residual);
            let local_index = sub.local_index(g.n());
            let local: Vec<usize> = step
                .block
                .vertices
                .iter()
                .map(|&v| local_index[v].unwrap())
                .collect();
            let expected = sub.map_to_host(&boundary_of(&sub.graph, &local));
            let mut got = step.block.boundary.clone();
            got.sort_unstable();
            let mut expected = expected;
            expected.sort_unstable();
            if got != expected {
                return Err(format!(
                    "block {t} boundary does not match its residual graph"
                ));
            }
            for &v in &step.block.vertices {
                delete(&mut alive, v)?;
            }
            check_peel(&mut alive, &step.peeled, &mut delete)?;
        }
        for &v in &self.residual {
            delete(&mut alive, v)?;
        }
        match alive.iter().position(|&a| a) {
            Some(v) => Err(format!("vertex {v} is not covered")),
            None => Ok(()),
        }
    }
}
