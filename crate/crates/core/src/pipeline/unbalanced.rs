use rand::Rng;

use super::{
    connector_graph, ensure_sound, exceeds, girth_gate, insert_connector, lift_certificate, rate,
    Connectors, PipelineRun, PipelineTrace, Profile, RunOptions,
};
use crate::error::PipelineError;
use crate::graph::{mask_of, Graph};
use crate::invariants::{avg_core, degeneracy_order};
use crate::rng::stage_rng;
use crate::subdivision::{find_subdivision, FindOutcome, SearchMode, SubdivisionCertificate};

const OP: &str = "unbalanced_step";

/// An induced `K_{d+1}`-subdivision from a set `A` with at least two
/// neighbors in each of few vertices `B`.
///
/// Every `a` with at most `4d` neighbors in `B` fixes a nonadjacent pair
/// `pi(a)` of them. `B` is sampled at the profile rate (default `1/(6d)`),
/// `R` keeps the sampled vertices without a sampled right-neighbor in a
/// degeneracy order of `G[B]`, and `a` is good when `N_R(a) = pi(a)`. An
/// independent set `I` of good vertices yields the auxiliary graph on `R`
/// with edges `pi(a)`, `a` in `I`, whose 1-subdivision is induced in `g`.
/// A plain `K_{d+1}`-subdivision in its `d`-core is lifted through `I`.
/// Sampling is repeated up to `retries` times until `X - Y > d|R|` and the
/// later stages succeed.
pub fn unbalanced_step(
    g: &Graph,
    a_set: &[usize],
    b_set: &[usize],
    d: usize,
    profile: &Profile,
    opts: RunOptions,
) -> PipelineRun<SubdivisionCertificate> {
    let mut trace = PipelineTrace::new(OP, opts.timings);
    let outcome = run(g, a_set, b_set, d, profile, opts, &mut trace);
    PipelineRun::finish(trace, outcome)
}

fn run(
    g: &Graph,
    a_set: &[usize],
    b_set: &[usize],
    d: usize,
    profile: &Profile,
    opts: RunOptions,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let n = g.n();
    let mut st = trace.open("preconditions");
    let pre = |msg: String| PipelineError::precondition("preconditions", msg);
    if d < 2 {
        return Err(pre(format!("d must be at least 2, got {d}")));
    }
    if let Some(&v) = a_set.iter().chain(b_set).find(|&&v| v >= n) {
        return Err(pre(format!("vertex {v} out of range")));
    }
    let b_mask = mask_of(n, b_set);
    if a_set.iter().any(|&a| b_mask[a]) {
        return Err(pre("A and B intersect".into()));
    }
    st.set("A", a_set);
    st.set("B", b_set);
    let degeneracy = degeneracy_order(g).degeneracy;
    st.value("degeneracy", degeneracy);
    if !st.check("d-degenerate", degeneracy <= d) {
        trace.close(st);
        return Err(pre(format!(
            "graph is {degeneracy}-degenerate, not {d}-degenerate"
        )));
    }
    if let Err(msg) = girth_gate(g, profile.step_girth, profile.relax_girth, &mut st) {
        trace.close(st);
        return Err(pre(msg));
    }
    if let Some(&a) = a_set.iter().find(|&&a| g.degree_into(a, &b_mask) < 2) {
        trace.close(st);
        return Err(pre(format!(
            "vertex {a} of A has fewer than two neighbors in B"
        )));
    }
    let (dd, na, nb) = (d as u128, a_set.len() as u128, b_set.len() as u128);
    st.check(
        "|A| > ratio d^2 |B|",
        exceeds(na, profile.unbalanced_ratio, dd * dd * nb),
    );
    trace.close(st);

    let mut st = trace.open("low-degree");
    let mut a0 = Vec::new();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    let mut skipped = 0usize;
    for &a in a_set {
        let nb_a: Vec<usize> = g
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&w| b_mask[w])
            .collect();
        if nb_a.len() > 4 * d {
            continue;
        }
        a0.push(a);
        let pair = (0..nb_a.len())
            .flat_map(|i| (i + 1..nb_a.len()).map(move |j| (i, j)))
            .map(|(i, j)| (nb_a[i], nb_a[j]))
            .find(|&(u, v)| !g.has_edge(u, v));
        match pair {
            Some((u, v)) => pairs.push((a, u, v)),
            None => skipped += 1,
        }
    }
    st.set("A0", &a0);
    st.check("|A0| > 5|A|/8", 8 * a0.len() > 5 * a_set.len());
    st.value(
        "pi",
        pairs
            .iter()
            .map(|&(a, u, v)| vec![a, u, v])
            .collect::<Vec<_>>(),
    );
    if skipped > 0 {
        st.warn(format!(
            "{skipped} vertices of A0 have no nonadjacent pair in B"
        ));
    }
    trace.close(st);

    let sample_rate = profile.unbalanced_rate.map_or(1.0 / (6.0 * d as f64), rate);
    let gb = g.induced_subgraph(b_set);
    let order = degeneracy_order(&gb.graph);
    let mut last_failure = None;
    for attempt in 0..opts.retries {
        let mut sub = PipelineTrace::new(OP, opts.timings);
        match attempt_once(
            g,
            d,
            &pairs,
            &gb,
            &order,
            sample_rate,
            profile,
            opts.seed,
            attempt,
            &mut sub,
        ) {
            Ok(cert) => {
                trace.stages.append(&mut sub.stages);
                return Ok(cert);
            }
            Err(e @ PipelineError::Structural { .. }) => {
                trace.stages.append(&mut sub.stages);
                return Err(e);
            }
            Err(e) => last_failure = Some((e, sub)),
        }
    }
    match last_failure {
        Some((e, mut sub)) => {
            trace.stages.append(&mut sub.stages);
            Err(e)
        }
        None => Err(PipelineError::absent(
            "sampling",
            "no attempts allowed (retries = 0)",
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn attempt_once(
    g: &Graph,
    d: usize,
    pairs: &[(usize, usize, usize)],
    gb: &crate::graph::InducedSubgraph,
    order: &crate::invariants::DegeneracyOrder,
    sample_rate: f64,
    profile: &Profile,
    seed: u64,
    attempt: u32,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let n = g.n();
    let mut st = trace.open("sampling");
    st.attempts(attempt + 1);
    let mut rng = stage_rng(seed, "unbalanced-sample", attempt);
    let chosen_local: Vec<bool> = (0..gb.graph.n())
        .map(|_| rng.random_bool(sample_rate))
        .collect();
    let r_local: Vec<usize> = (0..gb.graph.n())
        .filter(|&v| {
            chosen_local[v] && !order.right_neighbors(&gb.graph, v).any(|w| chosen_local[w])
        })
        .collect();
    let r_set = gb.map_to_host(&r_local);
    let r_mask = mask_of(n, &r_set);
    st.set("R", &r_set);
    if !st.check("R independent", g.is_independent(&r_set)) {
        trace.close(st);
        return Err(PipelineError::structural(
            "sampling",
            "right-neighbor filter produced a dependent R",
        ));
    }
    let good: Vec<(usize, usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(a, u, v)| r_mask[u] && r_mask[v] && g.degree_into(a, &r_mask) == 2)
        .collect();
    let good_mask = mask_of(n, &good.iter().map(|t| t.0).collect::<Vec<_>>());
    let f_edges: Vec<(usize, usize)> = good
        .iter()
        .flat_map(|&(a, _, _)| {
            g.neighbors(a)
                .iter()
                .filter(move |&&w| w > a)
                .map(move |&w| (a, w))
        })
        .filter(|&(_, w)| good_mask[w])
        .collect();
    let mut dropped = vec![false; n];
    for &(u, v) in &f_edges {
        dropped[u.max(v)] = true;
    }
    let independent: Vec<(usize, usize, usize)> =
        good.iter().copied().filter(|t| !dropped[t.0]).collect();
    let (x, y) = (good.len(), f_edges.len());
    st.set("good", &good.iter().map(|t| t.0).collect::<Vec<_>>());
    st.edges("F", f_edges.iter().copied());
    st.set("I", &independent.iter().map(|t| t.0).collect::<Vec<_>>());
    st.value("X", x);
    st.value("Y", y);
    let enough = st.check("X - Y > d|R|", x > y + d * r_set.len());
    trace.close(st);
    if !enough {
        return Err(PipelineError::absent(
            "sampling",
            format!(
                "X - Y > d|R| failed in all attempts (last: X={x}, Y={y}, |R|={})",
                r_set.len()
            ),
        ));
    }

    let mut st = trace.open("auxiliary");
    let mut connectors = Connectors::new();
    for &(a, u, v) in &independent {
        if let Err(e) = insert_connector(&mut connectors, u, v, vec![u, a, v], "auxiliary") {
            trace.close(st);
            return Err(e);
        }
    }
    let h = connector_graph(&r_set, &connectors, n);
    st.edges("H", connectors.keys().copied());
    st.check("d(H) > 2d", h.m() > d * h.n());
    trace.close(st);

    let mut st = trace.open("core");
    let Some(core) = avg_core(&h, d - 1) else {
        trace.close(st);
        return Err(PipelineError::absent(
            "core",
            "auxiliary graph has no subgraph of minimum degree d",
        ));
    };
    let h_core = h.induced_subgraph(&core);
    let core_hosts: Vec<usize> = core.iter().map(|&v| r_set[v]).collect();
    st.set("H'", &core_hosts);
    trace.close(st);

    let mut st = trace.open("topological");
    let pattern = Graph::complete(d + 1);
    let found = find_subdivision(
        &h_core.graph,
        &pattern,
        profile.finder_budget,
        SearchMode::Plain,
    )
    .map_err(|e| PipelineError::absent("topological", e.to_string()));
    let plain = match found {
        Ok(FindOutcome::Found(c)) => c,
        Ok(FindOutcome::NoneExists) => {
            trace.close(st);
            return Err(PipelineError::absent(
                "topological",
                format!("H' has no K_{}-subdivision", d + 1),
            ));
        }
        Ok(FindOutcome::BudgetExhausted) => {
            trace.close(st);
            return Err(PipelineError::absent(
                "topological",
                "finder budget exhausted",
            ));
        }
        Err(e) => {
            trace.close(st);
            return Err(e);
        }
    };
    st.set(
        "branch",
        &plain
            .branch
            .iter()
            .map(|&b| core_hosts[b])
            .collect::<Vec<_>>(),
    );
    trace.close(st);

    let mut st = trace.open("lift");
    let cert = lift_certificate(&plain, &core_hosts, &connectors);
    st.set("certificate", &cert.vertex_set());
    let sound = ensure_sound(g, &cert, "lift");
    st.check("induced and proper", sound.is_ok());
    trace.close(st);
    sound.map(|()| cert)
}
