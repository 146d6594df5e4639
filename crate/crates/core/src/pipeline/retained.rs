use serde::{Deserialize, Serialize};

use super::{PipelineRun, PipelineTrace, Profile, RunOptions};
use crate::connectivity::{block_decomposition, is_k_connected, Block};
use crate::error::PipelineError;
use crate::graph::{mask_of, Graph};

const OP: &str = "core_with_retained_degrees";

/// A `k`-connected block together with the members of `B` that kept all
/// but `2k^2` of their neighbors inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetainedCore {
    pub block: Block,
    /// Sorted; recomputed from degrees.
    pub retained: Vec<usize>,
}

/// Finds a `k`-connected induced block of `h` holding many vertices of `B`
/// whose degree drops by at most `2k^2`.
///
/// Runs the block decomposition with threshold `4k^2`, forms the exclusion
/// set `W = S + Z + N(S) + Q` from the block boundaries `S`, the peeled
/// vertices `Z` and `Q = {v : d_Z(v) > 2k^2}`, and picks the block with the
/// largest share of `B \ W` (earliest on ties). The retained set and the
/// block's connectivity are recomputed from scratch.
///
/// Requires `k >= 1`, `delta(h) >= core_min_degree_factor * k^2`,
/// `Delta(h) <= d_max` and `|B| * d_max >= n`. The Moore-type assumption
/// `2(k^2-1)^m >= 11 k^2 D^2` is recorded but not enforced.
pub fn core_with_retained_degrees(
    h: &Graph,
    k: usize,
    d_max: u64,
    m: u64,
    b_set: &[usize],
    profile: &Profile,
    opts: RunOptions,
) -> PipelineRun<RetainedCore> {
    let mut trace = PipelineTrace::new(OP, opts.timings);
    let outcome = run(h, k, d_max, m, b_set, profile, &mut trace);
    PipelineRun::finish(trace, outcome)
}

fn run(
    h: &Graph,
    k: usize,
    d_max: u64,
    m: u64,
    b_set: &[usize],
    profile: &Profile,
    trace: &mut PipelineTrace,
) -> Result<RetainedCore, PipelineError> {
    let n = h.n();
    let pre = |msg: String| PipelineError::precondition("preconditions", msg);
    if k == 0 {
        return Err(pre("k must be positive".into()));
    }
    if let Some(&v) = b_set.iter().find(|&&v| v >= n) {
        return Err(pre(format!("vertex {v} out of range")));
    }
    let kk = k * k;
    let mut st = trace.open("preconditions");
    st.set("B", b_set);
    let min_deg = h.min_degree().unwrap_or(0);
    let max_deg = h.max_degree().unwrap_or(0);
    let floor = profile.core_min_degree_factor as usize * kk;
    st.value("min_degree", min_deg);
    st.value("max_degree", max_deg);
    let b_mask = mask_of(n, b_set);
    let b_count = b_mask.iter().filter(|&&b| b).count();
    let checks = [
        ("nonempty", n > 0, "graph is empty".to_string()),
        (
            "min degree >= factor k^2",
            min_deg >= floor,
            format!("minimum degree {min_deg} is below {floor}"),
        ),
        (
            "max degree <= D",
            max_deg as u64 <= d_max,
            format!("maximum degree {max_deg} exceeds {d_max}"),
        ),
        (
            "|B| D >= n",
            b_count as u128 * d_max as u128 >= n as u128,
            format!("|B| = {b_count} is below n/D = {n}/{d_max}"),
        ),
    ];
    for (name, holds, msg) in checks {
        if !st.check(name, holds) {
            trace.close(st);
            return Err(pre(msg));
        }
    }
    let moore = moore_assumption(k as u64, m, d_max);
    if !st.check("2(k^2-1)^m >= 11 k^2 D^2", moore) {
        st.warn("the Moore-type size assumption fails; block sizes are not guaranteed");
    }
    trace.close(st);

    let mut st = trace.open("decomposition");
    let dec = block_decomposition(h, k);
    if let Err(msg) = dec.replay_check(h) {
        trace.close(st);
        return Err(PipelineError::structural("decomposition", msg));
    }
    st.value("blocks", dec.steps.len());
    st.set("initial_peel", &dec.initial_peel);
    if !st.check("complete", dec.complete) {
        st.set("residual", &dec.residual);
        trace.close(st);
        return Err(PipelineError::absent(
            "decomposition",
            format!(
                "block extraction failed on a residual graph of {} vertices",
                dec.residual.len()
            ),
        ));
    }
    if dec.steps.is_empty() {
        trace.close(st);
        return Err(PipelineError::absent(
            "decomposition",
            "no block survived the peeling",
        ));
    }
    let mut s_mask = vec![false; n];
    let mut z_mask = mask_of(n, &dec.initial_peel);
    for step in &dec.steps {
        for &v in &step.block.boundary {
            s_mask[v] = true;
        }
        for &v in &step.peeled {
            z_mask[v] = true;
        }
    }
    let mut w_mask: Vec<bool> = (0..n).map(|v| s_mask[v] || z_mask[v]).collect();
    let mut q_set = Vec::new();
    for v in (0..n).filter(|&v| s_mask[v]) {
        for &w in h.neighbors(v) {
            w_mask[w] = true;
        }
    }
    for v in 0..n {
        if !s_mask[v] && !z_mask[v] && h.degree_into(v, &z_mask) > 2 * kk {
            q_set.push(v);
        }
    }
    for &v in &q_set {
        w_mask[v] = true;
    }
    let b_prime: Vec<usize> = b_set.iter().copied().filter(|&v| !w_mask[v]).collect();
    st.set("S", &crate::graph::members(&s_mask));
    st.set("Z", &crate::graph::members(&z_mask));
    st.set("Q", &q_set);
    st.set("B'", &b_prime);
    trace.close(st);

    let mut st = trace.open("selection");
    let bp_mask = mask_of(n, &b_prime);
    let share = |block: &Block| block.vertices.iter().filter(|&&v| bp_mask[v]).count();
    let mut best = 0;
    for t in 1..dec.steps.len() {
        let (cur, cand) = (&dec.steps[best].block, &dec.steps[t].block);
        if share(cand) * cur.vertices.len() > share(cur) * cand.vertices.len() {
            best = t;
        }
    }
    let block = dec.steps[best].block.clone();
    st.value("block_index", best);
    st.set("H", &block.vertices);
    st.set("boundary", &block.boundary);
    let sub = h.induced_subgraph(&block.vertices);
    if !st.check("k-connected", is_k_connected(&sub.graph, k)) {
        trace.close(st);
        return Err(PipelineError::structural(
            "selection",
            format!("selected block is not {k}-connected"),
        ));
    }
    let in_block = mask_of(n, &block.vertices);
    let retained: Vec<usize> = block
        .vertices
        .iter()
        .copied()
        .filter(|&x| b_mask[x] && h.degree_into(x, &in_block) + 2 * kk >= h.degree(x))
        .collect();
    st.set("retained", &retained);
    st.check(
        "|retained| >= |H|/(2D)",
        2 * retained.len() as u128 * d_max as u128 >= block.vertices.len() as u128,
    );
    st.check(
        "B' within H is retained",
        block
            .vertices
            .iter()
            .filter(|&&v| bp_mask[v])
            .all(|v| retained.contains(v)),
    );
    trace.close(st);
    Ok(RetainedCore { block, retained })
}

/// `2(k^2-1)^m >= 11 k^2 D^2`, evaluated exactly.
fn moore_assumption(k: u64, m: u64, d_max: u64) -> bool {
    use num_bigint::BigUint;
    let base = BigUint::from((k * k).saturating_sub(1));
    let lhs = BigUint::from(2u32) * base.pow(u32::try_from(m).unwrap_or(u32::MAX));
    let rhs =
        BigUint::from(11u32) * BigUint::from(k * k) * BigUint::from(d_max) * BigUint::from(d_max);
    lhs >= rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loose() -> Profile {
        Profile {
            core_min_degree_factor: 1,
            ..Profile::desk()
        }
    }

    #[test]
    fn disjoint_cliques_keep_everything() {
        let g = Graph::disjoint_union(&[Graph::complete(30), Graph::complete(30)]);
        let all: Vec<usize> = (0..60).collect();
        let run = core_with_retained_degrees(&g, 1, 29, 1, &all, &loose(), RunOptions::default());
        let core = run.outcome.unwrap();
        assert_eq!(core.block.vertices.len(), 30);
        assert_eq!(core.retained, core.block.vertices);
    }

    #[test]
    fn bridged_cliques() {
        // Two K30 joined by a perfect matching on five vertices.
        let mut edges: Vec<(usize, usize)> =
            Graph::disjoint_union(&[Graph::complete(30), Graph::complete(30)])
                .edges()
                .collect();
        edges.extend((0..5).map(|i| (i, 30 + i)));
        let g = Graph::from_edges(60, edges).unwrap();
        let all: Vec<usize> = (0..60).collect();
        let d_max = 30;
        let run = core_with_retained_degrees(
            &g,
            2,
            d_max,
            3,
            &all,
            &Profile::desk(),
            RunOptions::default(),
        );
        let core = run.outcome.unwrap();
        assert!(2 * core.retained.len() as u64 * d_max >= core.block.vertices.len() as u64);
        let in_block = mask_of(60, &core.block.vertices);
        for &x in &core.retained {
            assert!(g.degree_into(x, &in_block) + 8 >= g.degree(x));
        }
    }

    #[test]
    fn preconditions() {
        let g = Graph::cycle(10);
        let all: Vec<usize> = (0..10).collect();
        let run =
            core_with_retained_degrees(&g, 2, 2, 1, &all, &Profile::desk(), RunOptions::default());
        assert!(matches!(
            run.outcome,
            Err(PipelineError::Precondition { .. })
        ));
        let k = Graph::complete(20);
        let run =
            core_with_retained_degrees(&k, 2, 19, 1, &[0], &Profile::desk(), RunOptions::default());
        assert!(matches!(
            run.outcome,
            Err(PipelineError::Precondition { .. })
        ));
    }

    #[test]
    fn moore_assumption_is_exact() {
        // k = 2: 2 * 3^m >= 44 D^2.
        assert!(moore_assumption(2, 4, 1));
        assert!(!moore_assumption(2, 2, 1));
    }
}
