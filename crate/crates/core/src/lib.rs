//! Induced subdivisions of complete graphs in graphs of large girth.
//!
//! The crate bundles
//! * graph primitives and invariants ([`graph`], [`invariants`], [`format`]),
//! * vertex connectivity, disjoint paths and block extraction
//!   ([`connectivity`]),
//! * subdivision certificates, their verifier and an exhaustive finder
//!   ([`subdivision`]),
//! * the randomized constructive pipeline ([`pipeline`]),
//! * finite projective planes, arcs and high-girth regular graphs
//!   ([`extremal`]),
//! * brute-force oracles used to cross-check the fast routines ([`oracle`]),
//! * generators of instances with planted structure ([`planted`]).

pub mod connectivity;
pub mod error;
pub mod extremal;
pub mod format;
pub mod graph;
pub mod invariants;
pub mod oracle;
pub mod pipeline;
pub mod planted;
pub mod rng;
pub mod subdivision;

pub use error::{CertificateError, DomainError, GraphError, PipelineError};
pub use graph::{Graph, GraphStats, InducedSubgraph};
pub use invariants::{BfsForest, DegeneracyOrder, Girth};
pub use subdivision::{SubdivisionCertificate, VerificationReport};
