//! The constructive argument as randomized, parameterized procedures.
//!
//! Every stage records what it did in a [`PipelineTrace`]. Random choices are
//! drawn from [`crate::rng::stage_rng`] with the stage name and attempt
//! number, so a run is a pure function of its inputs and seed. Probabilistic
//! existence steps become sample-and-check loops bounded by `retries`.
//!
//! Soundness does not depend on any hypothesis holding: every certificate
//! is verified as an induced, proper subdivision before it is returned, and
//! a failed verification is reported as a structural error instead.

mod assemble;
mod cleaning;
mod descriptor;
mod mader;
mod params;
mod paths;
mod profile;
mod retained;
mod theorem;
mod trace;
mod unbalanced;
mod witness;

pub use assemble::{assemble_subdivision, AssemblyInput};
pub use cleaning::{cleaning_step, CleaningOutput};
pub use descriptor::{parse_descriptor, run_descriptor, RunDescriptor, RunResult, DEFAULT_RETRIES};
pub use mader::{induced_mader, minimal_reduction};
pub use params::{
    default_mader_parameters, display_big, mader_parameters, mader_tuple, ratio_to_f64, Condition,
    Interval, MaderOverrides, MaderParameters,
};
pub use paths::{build_path_system, sample_aux_graph, separated_roots, AuxSample, PathSystem};
pub use profile::Profile;
pub use retained::{core_with_retained_degrees, RetainedCore};
pub use theorem::main_theorem;
pub use trace::{PipelineTrace, StageGuard, StageRecord};
pub use unbalanced::unbalanced_step;
pub use witness::{branch_witnesses, BranchWitness, SeparationBudget, WitnessCheck};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::PipelineError;
use crate::graph::Graph;
use crate::invariants::girth;
use crate::subdivision::{verify, SubdivisionCertificate};

/// Randomness and bookkeeping shared by all operations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub seed: u64,
    /// Random attempts per sampling stage.
    pub retries: u32,
    /// Record wall-clock time per stage.
    pub timings: bool,
}

impl RunOptions {
    pub fn new(seed: u64, retries: u32) -> Self {
        RunOptions {
            seed,
            retries,
            timings: false,
        }
    }
}

/// Result of a pipeline operation together with its trace, which is kept
/// on failure as well.
#[derive(Clone, Debug)]
pub struct PipelineRun<T> {
    pub outcome: Result<T, PipelineError>,
    pub trace: PipelineTrace,
}

impl<T> PipelineRun<T> {
    fn finish(mut trace: PipelineTrace, outcome: Result<T, PipelineError>) -> Self {
        if let Err(e) = &outcome {
            if trace.failed_stage.is_none() {
                trace.failed_stage = e.stage().map(str::to_string);
            }
        }
        PipelineRun { outcome, trace }
    }

    pub fn ok(&self) -> Option<&T> {
        self.outcome.as_ref().ok()
    }
}

/// Verifies that `cert` is an induced, proper subdivision in `host`.
pub fn ensure_sound(
    host: &Graph,
    cert: &SubdivisionCertificate,
    stage: &str,
) -> Result<(), PipelineError> {
    let report = verify(host, cert)
        .map_err(|e| PipelineError::structural(stage, format!("malformed certificate: {e}")))?;
    if report.is_induced && report.is_proper {
        Ok(())
    } else {
        Err(PipelineError::structural(
            stage,
            format!(
                "certificate failed verification: {:?}",
                report.violations.first()
            ),
        ))
    }
}

/// Checks `girth(g) >= floor`, or only warns when `relax` is set. Returns
/// whether the girth bound actually holds.
fn girth_gate(g: &Graph, floor: u64, relax: bool, st: &mut StageGuard) -> Result<bool, String> {
    let gi = girth(g);
    st.value("girth", gi.to_string());
    st.value("girth_floor", floor);
    if st.check("girth >= floor", gi.at_least(floor)) {
        Ok(true)
    } else if relax {
        st.warn(format!(
            "girth {gi} below {floor}; continuing because girth checks are relaxed"
        ));
        Ok(false)
    } else {
        Err(format!("girth {gi} is below {floor}"))
    }
}

/// `x > (num/den) * y` for nonnegative integers.
fn exceeds(x: u128, frac: [u64; 2], y: u128) -> bool {
    x * frac[1] as u128 > frac[0] as u128 * y
}

/// `x >= (num/den) * y` for nonnegative integers.
fn at_least(x: u128, frac: [u64; 2], y: u128) -> bool {
    x * frac[1] as u128 >= frac[0] as u128 * y
}

fn rate(frac: [u64; 2]) -> f64 {
    frac[0] as f64 / frac[1] as f64
}

/// Host paths standing in for auxiliary edges. Keys are `(min, max)` host
/// pairs; each path runs from the smaller to the larger end.
pub type Connectors = BTreeMap<(usize, usize), Vec<usize>>;

/// Adds a connector, failing if the pair already has one (two connectors
/// between the same ends would close a short cycle in the host).
fn insert_connector(
    connectors: &mut Connectors,
    u: usize,
    v: usize,
    mut path: Vec<usize>,
    stage: &str,
) -> Result<(), PipelineError> {
    let key = (u.min(v), u.max(v));
    if path.first() != Some(&key.0) {
        path.reverse();
    }
    if let Some(existing) = connectors.get(&key) {
        return Err(PipelineError::structural(
            stage,
            format!(
                "duplicate auxiliary edge {}-{} from connectors {:?} and {:?}",
                key.0, key.1, existing, path
            ),
        ));
    }
    connectors.insert(key, path);
    Ok(())
}

/// Auxiliary graph on `vertices` (host indices) with one edge per connector.
/// Returns the graph on local indices `0..vertices.len()`.
fn connector_graph(vertices: &[usize], connectors: &Connectors, host_n: usize) -> Graph {
    let mut local = vec![usize::MAX; host_n];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    Graph::from_edges(
        vertices.len(),
        connectors.keys().map(|&(u, v)| (local[u], local[v])),
    )
    .expect("connectors are distinct pairs")
}

/// Replaces every step of a walk through connector ends (host indices) by
/// its connector. Panics if a step has no connector.
pub fn lift_walk(walk: &[usize], connectors: &Connectors) -> Vec<usize> {
    let mut lifted = walk.first().copied().into_iter().collect::<Vec<_>>();
    for w in walk.windows(2) {
        let (x, y) = (w[0], w[1]);
        let c = &connectors[&(x.min(y), x.max(y))];
        if c[0] == x {
            lifted.extend_from_slice(&c[1..]);
        } else {
            lifted.extend(c.iter().rev().skip(1));
        }
    }
    lifted
}

/// Replaces every edge of a certificate living in an auxiliary graph by its
/// connector. `to_host` maps auxiliary vertices to host vertices.
fn lift_certificate(
    aux: &SubdivisionCertificate,
    to_host: &[usize],
    connectors: &Connectors,
) -> SubdivisionCertificate {
    let paths = aux
        .paths
        .iter()
        .map(|(&edge, path)| {
            let ends: Vec<usize> = path.iter().map(|&v| to_host[v]).collect();
            (edge, lift_walk(&ends, connectors))
        })
        .collect();
    SubdivisionCertificate {
        pattern: aux.pattern.clone(),
        branch: aux.branch.iter().map(|&b| to_host[b]).collect(),
        paths,
    }
}

/// Keeps the first `k` branch vertices of a clique certificate and the paths
/// among them. An induced (proper) subdivision stays induced (proper).
pub fn restrict_clique(cert: &SubdivisionCertificate, k: usize) -> SubdivisionCertificate {
    assert!(k <= cert.branch.len());
    SubdivisionCertificate {
        pattern: Graph::complete(k),
        branch: cert.branch[..k].to_vec(),
        paths: cert
            .paths
            .iter()
            .filter(|(&(u, v), _)| u < k && v < k)
            .map(|(&e, p)| (e, p.clone()))
            .collect(),
    }
}
