use num_bigint::BigUint;
use rand::Rng;

use super::params::{mader_tuple, rational};
use super::{
    at_least, cleaning_step, connector_graph, ensure_sound, exceeds, girth_gate, induced_mader,
    insert_connector, lift_certificate, rate, restrict_clique, unbalanced_step, CleaningOutput,
    Connectors, MaderParameters, PipelineRun, PipelineTrace, Profile, RunOptions,
};
use crate::error::PipelineError;
use crate::graph::{mask_of, Graph, InducedSubgraph};
use crate::invariants::{avg_core, degeneracy_order, girth, k_core, DegeneracyOrder};
use crate::rng::stage_rng;
use crate::subdivision::{
    find_induced_subdivision, find_subdivision, FindOutcome, SearchMode, SubdivisionCertificate,
};

const OP: &str = "main_theorem";

/// An induced proper `K_{k+1}`-subdivision in a graph of minimum degree at
/// least `k` and large girth.
///
/// Passes to the `d`-core where `d` is the degeneracy. For `d = 3` the
/// exhaustive finder is asked for a proper induced `K_4`-subdivision.
/// Otherwise `B` holds the vertices of degree at least `d^b_exponent`, `A`
/// the others with two or more neighbors in `B`, and `A'` those with exactly
/// one. Many `A` go to the unbalanced step; a large `A'` goes to the cleaning
/// step and the Case 1 construction; otherwise `G - B` goes to the Mader
/// stage. The `K_{d+1}`-subdivision found is cut down to `K_{k+1}`.
pub fn main_theorem(
    g: &Graph,
    k: usize,
    profile: &Profile,
    opts: RunOptions,
) -> PipelineRun<SubdivisionCertificate> {
    let mut trace = PipelineTrace::new(OP, opts.timings);
    let outcome = run(g, k, profile, opts, &mut trace);
    PipelineRun::finish(trace, outcome)
}

fn run(
    g: &Graph,
    k: usize,
    profile: &Profile,
    opts: RunOptions,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let pre = |msg: String| PipelineError::precondition("preconditions", msg);
    if k < 3 {
        return Err(pre(format!("k must be at least 3, got {k}")));
    }
    let mut st = trace.open("preconditions");
    let min_deg = g.min_degree().unwrap_or(0);
    st.value("min_degree", min_deg);
    if !st.check("min degree >= k", g.n() > 0 && min_deg >= k) {
        trace.close(st);
        return Err(pre(format!("minimum degree {min_deg} is below k = {k}")));
    }
    if let Err(msg) = girth_gate(g, profile.main_girth, profile.relax_girth, &mut st) {
        trace.close(st);
        return Err(pre(msg));
    }
    trace.close(st);

    let mut st = trace.open("restrict");
    let d = degeneracy_order(g).degeneracy;
    let core = g.induced_subgraph(&k_core(g, d));
    st.value("d", d);
    st.set("core", &core.host_of);
    trace.close(st);

    let cert = if d == 3 {
        small_degree(&core, profile, trace)?
    } else {
        let local = large_degree(&core.graph, d, profile, opts, trace, &core.host_of)?;
        local.relabel(&core.host_of)
    };

    let mut st = trace.open("finish");
    let cut = restrict_clique(&cert, k + 1);
    st.set("certificate", &cut.vertex_set());
    let sound = ensure_sound(g, &cut, "finish");
    st.check("induced and proper", sound.is_ok());
    trace.close(st);
    sound.map(|()| cut)
}

/// `d = 3`: exhaustive search for a proper induced `K_4`-subdivision.
fn small_degree(
    core: &InducedSubgraph,
    profile: &Profile,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let mut st = trace.open("small-degree");
    let k4 = Graph::complete(4);
    let search = |proper| find_induced_subdivision(&core.graph, &k4, profile.finder_budget, proper);
    let found = search(true).map_err(|e| PipelineError::absent("small-degree", e.to_string()));
    let result = match found {
        Ok(FindOutcome::Found(c)) => Ok(c.relabel(&core.host_of)),
        Ok(FindOutcome::NoneExists) => {
            // Record whether the improper notion would have succeeded.
            if let Ok(FindOutcome::Found(c)) = search(false) {
                st.value("improper_certificate_exists", true);
                st.set(
                    "improper_certificate",
                    &c.relabel(&core.host_of).vertex_set(),
                );
            }
            Err(PipelineError::absent(
                "small-degree",
                "no proper induced K_4-subdivision exists",
            ))
        }
        Ok(FindOutcome::BudgetExhausted) => Err(PipelineError::absent(
            "small-degree",
            "finder budget exhausted",
        )),
        Err(e) => Err(e),
    };
    st.check("found", result.is_ok());
    trace.close(st);
    result
}

/// `d >= 4`, on the `d`-core `g` (local indices). `to_host` maps local
/// vertices for the trace.
fn large_degree(
    g: &Graph,
    d: usize,
    profile: &Profile,
    opts: RunOptions,
    trace: &mut PipelineTrace,
    to_host: &[usize],
) -> Result<SubdivisionCertificate, PipelineError> {
    let n = g.n();
    let hosts = |vs: &[usize]| vs.iter().map(|&v| to_host[v]).collect::<Vec<_>>();
    let mut st = trace.open("partition");
    let threshold = (d as u64)
        .checked_pow(profile.b_exponent)
        .unwrap_or(u64::MAX);
    let b_set: Vec<usize> = (0..n)
        .filter(|&v| g.degree(v) as u64 >= threshold)
        .collect();
    let b_mask = mask_of(n, &b_set);
    let a_set: Vec<usize> = (0..n)
        .filter(|&v| !b_mask[v] && g.degree_into(v, &b_mask) >= 2)
        .collect();
    let a_prime: Vec<usize> = (0..n)
        .filter(|&v| !b_mask[v] && g.degree_into(v, &b_mask) == 1)
        .collect();
    st.value("degree_threshold", threshold);
    st.set("B", &hosts(&b_set));
    st.set("A", &hosts(&a_set));
    st.set("A'", &hosts(&a_prime));
    let dd = d as u128;
    let unbalanced = st.check(
        "|A| > ratio d^2 |B|",
        exceeds(
            a_set.len() as u128,
            profile.unbalanced_ratio,
            dd * dd * b_set.len() as u128,
        ),
    );
    let case1 = !unbalanced
        && st.check(
            "|A'| >= fraction n",
            at_least(a_prime.len() as u128, profile.case1_fraction, n as u128),
        );
    let route = if unbalanced {
        "unbalanced"
    } else if case1 {
        "case1"
    } else {
        "case2"
    };
    st.value("route", route);
    trace.close(st);

    match route {
        "unbalanced" => {
            let run = unbalanced_step(g, &a_set, &b_set, d, profile, opts);
            trace.absorb("unbalanced", run.trace, to_host);
            run.outcome
        }
        "case1" => {
            let cleaned = cleaning_step(g, &a_prime, &b_set, d, profile, opts);
            trace.absorb("cleaning", cleaned.trace, to_host);
            let cleaned = cleaned.outcome?;
            let mut sub = PipelineTrace::new(OP, opts.timings);
            let outcome = case_one(g, d, &a_set, &b_set, &cleaned, profile, opts, &mut sub);
            if let Err(e) = &outcome {
                sub.failed_stage = e.stage().map(str::to_string);
            }
            trace.absorb("case1", sub, to_host);
            outcome
        }
        _ => {
            let rest = g.without_vertices(&b_set);
            let params = case_two_parameters(d, profile)?;
            let run = induced_mader(&rest.graph, &params, profile, opts);
            let map: Vec<usize> = rest.host_of.iter().map(|&v| to_host[v]).collect();
            trace.absorb("mader", run.trace, &map);
            run.outcome.map(|c| c.relabel(&rest.host_of))
        }
    }
}

/// Parameters for `G - B`: `s = d + 1`, `eta` and `(ell, m)` from the
/// profile (the tuple for `d` by default), `D` from the profile or
/// `d^b_exponent`, then the profile's overrides.
fn case_two_parameters(d: usize, profile: &Profile) -> Result<MaderParameters, PipelineError> {
    let (ell, m) = profile
        .mader_ell_m
        .map_or_else(|| mader_tuple(d as u64), |[l, m]| (l, m));
    let d_max = match profile.mader_d_max {
        Some(v) => BigUint::from(v),
        None => BigUint::from(d as u64).pow(profile.b_exponent),
    };
    let [en, ed] = profile.mader_eta;
    MaderParameters::compute(d as u64 + 1, rational(en, ed), d_max, ell, m)?
        .with_overrides(&profile.mader_overrides)
}

/// A vertex `y` of `Y2` with its two chosen neighbors in `X'` and their
/// neighbors in `B`.
#[derive(Clone, Copy, Debug)]
struct Triple {
    y: usize,
    x: [usize; 2],
    b: [usize; 2],
}

/// Case 1: anticomplete triples `y, x1, x2` over the cleaned sets, sampled
/// independent hubs `R`, and the auxiliary graph on `R` whose edges are
/// length-4 connectors `b1 x1 y x2 b2`.
#[allow(clippy::too_many_arguments)]
fn case_one(
    g: &Graph,
    d: usize,
    a_set: &[usize],
    b_set: &[usize],
    cleaned: &CleaningOutput,
    profile: &Profile,
    opts: RunOptions,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let n = g.n();
    let b_mask = mask_of(n, b_set);
    let a_mask = mask_of(n, a_set);
    let x_mask = mask_of(n, &cleaned.x_prime);

    let mut st = trace.open("triples");
    let y0: Vec<usize> = cleaned
        .y
        .iter()
        .copied()
        .filter(|&y| !a_mask[y] && !b_mask[y])
        .collect();
    let mut removed = vec![false; n];
    let mut y1: Vec<(usize, [usize; 2])> = Vec::new();
    for &y in &y0 {
        if removed[y] {
            continue;
        }
        let xs: Vec<usize> = g
            .neighbors(y)
            .iter()
            .copied()
            .filter(|&x| x_mask[x])
            .take(2)
            .collect();
        if xs.len() < 2 {
            continue;
        }
        y1.push((y, [xs[0], xs[1]]));
        removed[y] = true;
        for &x in &xs {
            for &w in g.neighbors(x) {
                removed[w] = true;
            }
        }
    }
    // L joins an earlier y to a later y' when P_y touches x1^{y'} or x2^{y'}.
    let mut y2: Vec<(usize, [usize; 2])> = Vec::new();
    let triple_set = |y: usize, x: [usize; 2]| [y, x[0], x[1]];
    for &(y, x) in &y1 {
        let conflict = y2.iter().any(|&(p, px)| {
            triple_set(p, px)
                .iter()
                .any(|&v| x.iter().any(|&w| v == w || g.has_edge(v, w)))
        });
        if !conflict {
            y2.push((y, x));
        }
    }
    let anticomplete = y2.iter().enumerate().all(|(i, &(y, x))| {
        y2[..i].iter().all(|&(p, px)| {
            triple_set(p, px).iter().all(|&u| {
                triple_set(y, x)
                    .iter()
                    .all(|&v| u != v && !g.has_edge(u, v))
            })
        })
    });
    // Two triples on one hub pair close a cycle of length 8.
    let strict = girth(g).at_least(9);
    st.value("girth_excludes_duplicates", strict);
    st.set("Y0", &y0);
    st.set("Y1", &y1.iter().map(|t| t.0).collect::<Vec<_>>());
    st.set("Y2", &y2.iter().map(|t| t.0).collect::<Vec<_>>());
    if !st.check("triples anticomplete", anticomplete) {
        trace.close(st);
        return Err(PipelineError::structural(
            "triples",
            "triples of Y2 are not pairwise anticomplete",
        ));
    }
    let mut triples = Vec::new();
    let mut dropped = 0;
    for &(y, x) in &y2 {
        let hub = |x: usize| g.neighbors(x).iter().copied().find(|&b| b_mask[b]);
        match (hub(x[0]), hub(x[1])) {
            (Some(b1), Some(b2)) if b1 != b2 && !g.has_edge(b1, b2) => {
                triples.push(Triple { y, x, b: [b1, b2] })
            }
            _ => dropped += 1,
        }
    }
    st.value(
        "P_y",
        triples
            .iter()
            .map(|t| vec![t.y, t.x[0], t.x[1]])
            .collect::<Vec<_>>(),
    );
    if dropped > 0 {
        st.warn(format!("{dropped} triples have equal or adjacent hubs"));
    }
    trace.close(st);

    let gb = g.induced_subgraph(b_set);
    let order = degeneracy_order(&gb.graph);
    let sample_rate = profile.case1_rate.map_or(1.0 / (2.0 * d as f64), rate);
    let mut last_failure = None;
    for attempt in 0..opts.retries {
        let mut sub = PipelineTrace::new(OP, opts.timings);
        let sampling = Sampling {
            gb: &gb,
            order: &order,
            rate: sample_rate,
            strict,
        };
        match case_one_attempt(
            g, d, &triples, sampling, profile, opts.seed, attempt, &mut sub,
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

/// How `R` is drawn from `B`, and whether a duplicate hub pair is an error.
#[derive(Clone, Copy)]
struct Sampling<'a> {
    gb: &'a InducedSubgraph,
    order: &'a DegeneracyOrder,
    rate: f64,
    /// The host girth rules out two triples on one hub pair.
    strict: bool,
}

#[allow(clippy::too_many_arguments)]
fn case_one_attempt(
    g: &Graph,
    d: usize,
    triples: &[Triple],
    sampling: Sampling<'_>,
    profile: &Profile,
    seed: u64,
    attempt: u32,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let n = g.n();
    let Sampling { gb, order, .. } = sampling;
    let mut st = trace.open("sampling");
    st.attempts(attempt + 1);
    let mut rng = stage_rng(seed, "case1-sample", attempt);
    let chosen: Vec<bool> = (0..gb.graph.n())
        .map(|_| rng.random_bool(sampling.rate))
        .collect();
    let r_local: Vec<usize> = (0..gb.graph.n())
        .filter(|&v| chosen[v] && !order.right_neighbors(&gb.graph, v).any(|w| chosen[w]))
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
    let good: Vec<&Triple> = triples
        .iter()
        .filter(|t| r_mask[t.b[0]] && r_mask[t.b[1]] && g.degree_into(t.y, &r_mask) == 0)
        .collect();
    st.set("good", &good.iter().map(|t| t.y).collect::<Vec<_>>());
    let enough = st.check("Z > d|R|", good.len() > d * r_set.len());
    trace.close(st);
    if !enough {
        return Err(PipelineError::absent(
            "sampling",
            format!(
                "Z > d|R| failed in all attempts (last: Z={}, |R|={})",
                good.len(),
                r_set.len()
            ),
        ));
    }

    let mut st = trace.open("auxiliary");
    let mut connectors = Connectors::new();
    let mut duplicates = 0;
    for t in &good {
        let key = (t.b[0].min(t.b[1]), t.b[0].max(t.b[1]));
        if !sampling.strict && connectors.contains_key(&key) {
            duplicates += 1;
            continue;
        }
        let path = vec![t.b[0], t.x[0], t.y, t.x[1], t.b[1]];
        if let Err(e) = insert_connector(&mut connectors, t.b[0], t.b[1], path, "auxiliary") {
            trace.close(st);
            return Err(e);
        }
    }
    if duplicates > 0 {
        st.warn(format!("{duplicates} good triples repeat a hub pair; girth is below 9, so only the first is kept"));
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
    let plain = match find_subdivision(
        &h_core.graph,
        &pattern,
        profile.finder_budget,
        SearchMode::Plain,
    ) {
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
            return Err(PipelineError::absent("topological", e.to_string()));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planted::{hub_cycle, padded_hub_graph};

    #[test]
    fn petersen_has_no_proper_k4() {
        let run = main_theorem(
            &Graph::petersen(),
            3,
            &Profile::desk(),
            RunOptions::new(0, 5),
        );
        assert!(matches!(run.outcome, Err(PipelineError::Absent { .. })));
        let stage = run.trace.stage("small-degree").unwrap();
        assert_eq!(stage.values["improper_certificate_exists"], true);
    }

    #[test]
    fn low_min_degree_is_rejected() {
        let run = main_theorem(&Graph::cycle(7), 3, &Profile::desk(), RunOptions::new(0, 5));
        assert!(matches!(
            run.outcome,
            Err(PipelineError::Precondition { .. })
        ));
    }

    #[test]
    fn padded_hubs_route_to_unbalanced_step() {
        let planted = padded_hub_graph(18, 9).expect("planted instance");
        let run = main_theorem(&planted.graph, 4, &Profile::desk(), RunOptions::new(1, 100));
        let cert = run.outcome.as_ref().unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(cert.pattern.n(), 5);
        ensure_sound(&planted.graph, cert, "t").unwrap();
        assert_eq!(
            run.trace.stage("partition").unwrap().values["route"],
            "unbalanced"
        );
        assert!(run.trace.indices_within(planted.graph.n()));
    }

    #[test]
    fn hub_cycle_runs_case_one() {
        let inst = hub_cycle(16, 320, 6).unwrap();
        let g = &inst.graph;
        let mut found = 0;
        for seed in 0..10 {
            let run = main_theorem(g, 4, &Profile::desk(), RunOptions::new(seed, 30));
            assert_eq!(
                run.trace.stage("partition").unwrap().values["route"],
                "case1"
            );
            match &run.outcome {
                Ok(cert) => {
                    ensure_sound(g, cert, "t").unwrap();
                    assert_eq!(cert.pattern.n(), 5);
                    found += 1;
                }
                Err(e) => assert!(matches!(e, PipelineError::Absent { .. }), "{e}"),
            }
        }
        assert!(found >= 8, "{found} of 10");
    }

    #[test]
    fn regular_graph_goes_to_case_two() {
        let g = match crate::extremal::high_girth_regular(4, 60, 5, 1, 200_000).unwrap() {
            crate::extremal::RegularOutcome::Found(g) => g,
            other => panic!("{other:?}"),
        };
        let run = main_theorem(&g, 4, &Profile::desk(), RunOptions::new(0, 3));
        assert_eq!(
            run.trace.stage("partition").unwrap().values["route"],
            "case2"
        );
        // The Mader girth threshold is far above 5.
        assert!(matches!(
            run.outcome,
            Err(PipelineError::Precondition { .. })
        ));
        assert_eq!(
            run.trace.failed_stage.as_deref(),
            Some("mader/preconditions")
        );
        let relaxed = Profile {
            relax_girth: true,
            ..Profile::desk()
        };
        let run = main_theorem(&g, 4, &relaxed, RunOptions::new(0, 3));
        match &run.outcome {
            Ok(cert) => ensure_sound(&g, cert, "t").unwrap(),
            Err(e) => assert!(!matches!(e, PipelineError::Structural { .. }), "{e}"),
        }
    }

    #[test]
    fn case_two_parameters_follow_profile() {
        let p = case_two_parameters(4, &Profile::desk()).unwrap();
        assert_eq!((p.s, p.ell, p.q, p.big_q), (5, 3, 2, 4));
        let full = case_two_parameters(4, &Profile::paper()).unwrap();
        assert!(full.feasible());
        assert_eq!(full.ell, 205);
    }
}
