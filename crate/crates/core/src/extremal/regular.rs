use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::DomainError;
use crate::graph::Graph;
use crate::invariants::{girth, local_girth, moore_lower_bound, shortest_cycle, Girth};
use crate::rng::stage_rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularOutcome {
    Found(Graph),
    /// The request is impossible: a graph with this degree and girth needs
    /// at least `bound` vertices.
    BelowMooreBound {
        bound: BigUint,
    },
    /// No graph of the requested girth was reached within the swap budget.
    SwapBudgetExhausted {
        best_girth: Girth,
    },
}

const PAIRING_RESTARTS: u32 = 1000;

/// Random simple `d`-regular graph by the pairing model, pairing only
/// points that keep the graph simple and restarting when stuck.
pub fn random_regular(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    for _ in 0..PAIRING_RESTARTS {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut stuck = false;
        while !points.is_empty() && !stuck {
            let mut placed = false;
            for _ in 0..64 {
                let i = rng.random_range(0..points.len());
                let j = rng.random_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if u != v && !edges.contains(&(u.min(v), u.max(v))) {
                    edges.insert((u.min(v), u.max(v)));
                    let (hi, lo) = (i.max(j), i.min(j));
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    placed = true;
                    break;
                }
            }
            if !placed {
                let options: Vec<(usize, usize)> = (0..points.len())
                    .flat_map(|i| (i + 1..points.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| {
                        let (u, v) = (points[i], points[j]);
                        u != v && !edges.contains(&(u.min(v), u.max(v)))
                    })
                    .collect();
                if options.is_empty() {
                    stuck = true;
                } else {
                    let (i, j) = options[rng.random_range(0..options.len())];
                    let (u, v) = (points[i], points[j]);
                    edges.insert((u.min(v), u.max(v)));
                    points.swap_remove(j);
                    points.swap_remove(i);
                }
            }
        }
        if !stuck {
            return Some(Graph::from_edges(n, edges).expect("pairing keeps the graph simple"));
        }
    }
    None
}

/// Girth first, then fewer vertices on shortest cycles.
fn score(g: &Graph) -> (Girth, std::cmp::Reverse<usize>) {
    let gi = girth(g);
    let tight = match gi {
        Girth::Finite(len) => (0..g.n())
            .filter(|&v| local_girth(g, v) == Some(len))
            .count(),
        Girth::Infinite => 0,
    };
    (gi, std::cmp::Reverse(tight))
}

/// Random `d`-regular graph on `n` vertices with girth at least `target`.
///
/// Requests below the Moore bound are rejected up front. Otherwise a random
/// pairing is improved by edge swaps: an edge `ab` of a shortest cycle and a
/// random disjoint edge `cd` become `ac, bd`, kept only when the girth does
/// not drop and the number of vertices on shortest cycles does not grow.
/// `swap_budget` bounds the number of attempted swaps.
pub fn high_girth_regular(
    d: usize,
    n: usize,
    target: usize,
    seed: u64,
    swap_budget: u64,
) -> Result<RegularOutcome, DomainError> {
    if !(d * n).is_multiple_of(2) {
        return Err(DomainError(format!(
            "d * n must be even, got d = {d}, n = {n}"
        )));
    }
    if n <= d {
        return Err(DomainError(format!(
            "a {d}-regular simple graph needs more than {d} vertices, got {n}"
        )));
    }
    if d >= 2 && target >= 4 {
        let bound = moore_lower_bound(d as u64, ((target - 2) / 2) as u64)?;
        if BigUint::from(n) < bound {
            return Ok(RegularOutcome::BelowMooreBound { bound });
        }
    }
    let mut rng = stage_rng(seed, "regular-pairing", 0);
    let Some(mut g) = random_regular(d, n, &mut rng) else {
        return Ok(RegularOutcome::SwapBudgetExhausted {
            best_girth: Girth::Finite(0),
        });
    };
    let mut rng = stage_rng(seed, "regular-swaps", 0);
    let mut current = score(&g);
    for _ in 0..swap_budget {
        if current.0.at_least(target as u64) {
            break;
        }
        let cycle = shortest_cycle(&g).expect("finite girth below target");
        let i = rng.random_range(0..cycle.len());
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let (mut c, mut e) = edges[rng.random_range(0..edges.len())];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut e);
        }
        if [c, e].iter().any(|x| *x == a || *x == b) || g.has_edge(a, c) || g.has_edge(b, e) {
            continue;
        }
        let swapped = Graph::from_edges(
            n,
            edges
                .iter()
                .copied()
                .filter(|&edge| edge != (a.min(b), a.max(b)) && edge != (c.min(e), c.max(e)))
                .chain([(a, c), (b, e)]),
        )
        .expect("swap keeps the graph simple");
        let next = score(&swapped);
        if next >= current {
            g = swapped;
            current = next;
        }
    }
    Ok(if current.0.at_least(target as u64) {
        RegularOutcome::Found(g)
    } else {
        RegularOutcome::SwapBudgetExhausted {
            best_girth: current.0,
        }
    })
}
