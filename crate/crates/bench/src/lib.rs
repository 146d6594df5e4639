//! Fixed inputs shared by the benchmarks.

use isubdiv_core::extremal::{incidence_graph, ProjectivePlane};
use isubdiv_core::planted::{hub_cycle, tree_blowup};
use isubdiv_core::Graph;

/// Incidence graph of PG(2, q).
pub fn incidence(q: usize) -> Graph {
    incidence_graph(&ProjectivePlane::new(q).expect("prime power"))
}

/// A 4-degenerate girth-5 graph on about 2300 vertices.
pub fn cycle_instance() -> Graph {
    hub_cycle(16, 320, 6).expect("girth 5").graph
}

/// The PG(2,7) incidence graph with every vertex blown up into a tree;
/// about 4000 vertices of girth 54.
pub fn blowup_instance() -> Graph {
    tree_blowup(&incidence(7), 2, 7).graph
}
