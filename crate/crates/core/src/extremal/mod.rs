//! Finite fields, projective planes, arcs and high-girth regular graphs.

mod arc;
mod field;
mod plane;
mod regular;

pub use arc::{is_arc, max_arc, ArcOutcome};
pub use field::{prime_power, FiniteField};
pub use plane::{incidence_graph, PlaneJson, ProjectivePlane};
pub use regular::{high_girth_regular, random_regular, RegularOutcome};
