//! Acceptance criteria, one verdict line each.
//!
//! Runs without the libtest harness so the verdicts are always printed.
//! Exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use isubdiv_core::connectivity::{solve_linkage, vertex_connectivity, LinkageOutcome};
use isubdiv_core::extremal::{high_girth_regular, random_regular, RegularOutcome};
use isubdiv_core::extremal::{incidence_graph, is_arc, max_arc, ArcOutcome, ProjectivePlane};
use isubdiv_core::format::GraphJson;
use isubdiv_core::invariants::{
    color_count, degeneracy_order, girth, greedy_color, is_proper_coloring, moore_lower_bound,
};
use isubdiv_core::oracle;
use isubdiv_core::pipeline::{
    cleaning_step, induced_mader, lift_walk, mader_parameters, mader_tuple, main_theorem,
    run_descriptor, unbalanced_step, Connectors, MaderOverrides, MaderParameters, PipelineTrace,
    Profile, RunDescriptor, RunOptions,
};
use isubdiv_core::planted::{
    hub_cycle, hub_graph, linear_attachment, padded_hub_graph, tree_blowup,
};
use isubdiv_core::rng::{gnp, stage_rng};
use isubdiv_core::subdivision::{
    find_induced_subdivision, one_subdivision, verify, FindOutcome, ViolationKind,
};
use isubdiv_core::{Graph, PipelineError, SubdivisionCertificate};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn parameter_table() -> Verdict {
    let started = Instant::now();
    let mut rows = Vec::new();
    for d in [4u64, 5, 6] {
        let (ell, m) = mader_tuple(d);
        let eta = BigRational::new(1.into(), 20.into());
        let p = mader_parameters(d + 1, eta, BigUint::from(d).pow(43), ell, m)
            .map_err(|e| format!("d={d}: {e}"))?;
        let product = (4 * ell + 1) * (2 * m + 2);
        if !p.feasible() || product >= 8_000_000 || p.girth_threshold >= 8_000_000 {
            return Err(format!(
                "d={d}: feasible={} (4l+1)(2m+2)={product} threshold={}",
                p.feasible(),
                p.girth_threshold
            ));
        }
        rows.push(format!("({ell},{m}) -> {}", p.girth_threshold));
    }
    let took = within(Duration::from_secs(1), started)?;
    Ok(format!("{} in {took:?}", rows.join(", ")))
}

fn segre() -> Verdict {
    let mut notes = Vec::new();
    for (q, target, exists) in [
        (3, 5, false),
        (5, 7, false),
        (7, 9, false),
        (2, 4, true),
        (4, 6, true),
        (8, 10, true),
    ] {
        let started = Instant::now();
        let plane = ProjectivePlane::new(q).map_err(|e| e.to_string())?;
        let outcome = max_arc(&plane, target, u64::MAX, true).map_err(|e| e.to_string())?;
        let took = within(Duration::from_secs(60), started).map_err(|e| format!("q={q}: {e}"))?;
        match (&outcome, exists) {
            (ArcOutcome::Found(points), true)
                if points.len() == target && is_arc(&plane, points) => {}
            (ArcOutcome::NoneExists, false) => {}
            (other, _) => return Err(format!("q={q} target={target}: {other:?}")),
        }
        notes.push(format!(
            "q={q}:{}({took:.0?})",
            if exists { "found" } else { "none" }
        ));
    }
    Ok(notes.join(" "))
}

fn witness_graph() -> Verdict {
    let started = Instant::now();
    let g = incidence_graph(&ProjectivePlane::new(5).map_err(|e| e.to_string())?);
    let regular = (0..g.n()).all(|v| g.degree(v) == 6);
    let gi = girth(&g).finite();
    let took = within(Duration::from_secs(1), started)?;
    if g.n() == 62 && regular && g.is_bipartite() && gi == Some(6) {
        Ok(format!(
            "62 vertices, 6-regular, bipartite, girth 6 in {took:?}"
        ))
    } else {
        Err(format!(
            "n={} regular={regular} bipartite={} girth={gi:?}",
            g.n(),
            g.is_bipartite()
        ))
    }
}

fn petersen_k4() -> Verdict {
    let started = Instant::now();
    let g = Graph::petersen();
    let k4 = Graph::complete(4);
    let found = find_induced_subdivision(&g, &k4, 10_000_000, false).map_err(|e| e.to_string())?;
    let FindOutcome::Found(cert) = found else {
        return Err(format!("finder returned {found:?}"));
    };
    let report = verify(&g, &cert).map_err(|e| e.to_string())?;
    let proper_search =
        find_induced_subdivision(&g, &k4, 10_000_000, true).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(10), started)?;
    let summary = format!(
        "induced={} proper={} in {took:?}; proper-only search: {}",
        report.is_induced,
        report.is_proper,
        match proper_search {
            FindOutcome::Found(_) => "found",
            FindOutcome::NoneExists => "none exists (completed)",
            FindOutcome::BudgetExhausted => "budget exhausted",
        }
    );
    if report.is_induced && report.is_proper {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; a proper K4-subdivision needs 10 vertices and 12 edges, Petersen has 15"
        ))
    }
}

/// Random pattern on 3 to 8 vertices with at least one edge and one
/// non-edge.
fn random_pattern<R: Rng>(rng: &mut R) -> Graph {
    loop {
        let n = rng.random_range(3..=8);
        let g = gnp(n, rng.random_range(0.3..0.8), rng);
        if g.m() >= 1 && g.m() < n * (n - 1) / 2 {
            return g;
        }
    }
}

/// The 1-subdivision of `pattern` with extra vertices wired to it and to
/// each other, under a random relabelling.
fn padded_instance<R: Rng>(pattern: &Graph, rng: &mut R) -> (Graph, SubdivisionCertificate) {
    let (sub, cert) = one_subdivision(pattern);
    let extra = rng.random_range(0..=6);
    let n = sub.n() + extra;
    let mut edges: BTreeSet<(usize, usize)> = sub.edges().collect();
    for x in sub.n()..n {
        for v in 0..x {
            if rng.random_bool(0.3) {
                edges.insert((v, x));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let host = Graph::from_edges(n, edges.iter().map(|&(u, v)| (perm[u], perm[v])))
        .expect("distinct edges");
    (host, cert.relabel(&perm))
}

fn with_edge(g: &Graph, u: usize, v: usize) -> Graph {
    Graph::from_edges(g.n(), g.edges().chain([(u, v)])).expect("new edge")
}

fn mutation_suite() -> Verdict {
    let mut rng = stage_rng(5, "acceptance-mutation", 0);
    let mut detected = [0usize; 4];
    let mut missed = Vec::new();
    let instances = 600;
    for i in 0..instances {
        let pattern = random_pattern(&mut rng);
        let (host, cert) = padded_instance(&pattern, &mut rng);
        let clean = verify(&host, &cert).map_err(|e| e.to_string())?;
        if !(clean.is_subdivision
            && clean.is_induced
            && clean.is_proper
            && clean.violations.is_empty())
        {
            return Err(format!(
                "instance {i}: unmutated certificate rejected: {:?}",
                clean.violations
            ));
        }
        let edges: Vec<(usize, usize)> = cert.paths.keys().copied().collect();
        let mid = |e: &(usize, usize)| cert.paths[e][1];

        // Host edge between internal vertices of two different paths.
        if edges.len() >= 2 {
            let (a, b) = (mid(&edges[0]), mid(&edges[edges.len() - 1]));
            let r = verify(&with_edge(&host, a, b), &cert).map_err(|e| e.to_string())?;
            if !r.is_induced && r.has(ViolationKind::ExtraEdge) {
                detected[0] += 1;
            } else {
                missed.push(format!("{i}: internal chord"));
            }
        } else {
            detected[0] += 1;
        }

        // Two paths sharing an internal vertex.
        if edges.len() >= 2 {
            let mut shared = cert.clone();
            let m = mid(&edges[0]);
            shared.paths.get_mut(&edges[1]).expect("path")[1] = m;
            let r = verify(&host, &shared).map_err(|e| e.to_string())?;
            if !r.is_subdivision && r.has(ViolationKind::SharedInternal) {
                detected[1] += 1;
            } else {
                missed.push(format!("{i}: shared internal"));
            }
        } else {
            detected[1] += 1;
        }

        // Edge between branch images of nonadjacent pattern vertices.
        let (u, v) = (0..pattern.n())
            .flat_map(|u| (u + 1..pattern.n()).map(move |v| (u, v)))
            .find(|&(u, v)| !pattern.has_edge(u, v))
            .expect("pattern has a non-edge");
        let r = verify(&with_edge(&host, cert.branch[u], cert.branch[v]), &cert)
            .map_err(|e| e.to_string())?;
        if !r.is_induced && r.has(ViolationKind::ExtraEdge) {
            detected[2] += 1;
        } else {
            missed.push(format!("{i}: nonadjacent branches"));
        }

        // Edge between branch images of adjacent pattern vertices whose
        // path has length 2.
        let (u, v) = edges[0];
        let r = verify(&with_edge(&host, cert.branch[u], cert.branch[v]), &cert)
            .map_err(|e| e.to_string())?;
        if !r.is_induced && r.has(ViolationKind::ExtraEdge) {
            detected[3] += 1;
        } else {
            missed.push(format!("{i}: adjacent branches"));
        }
    }
    if missed.is_empty() {
        Ok(format!(
            "{instances} certificates, detections per class {detected:?}, 0 false rejects"
        ))
    } else {
        Err(format!("{} missed, first: {}", missed.len(), missed[0]))
    }
}

fn connected_sample<R: Rng>(rng: &mut R, max_n: usize) -> Graph {
    loop {
        let n = rng.random_range(1..=max_n);
        let g = gnp(n, rng.random_range(0.15..0.85), rng);
        if g.components().len() == 1 {
            return g;
        }
    }
}

fn oracle_equivalence() -> Verdict {
    let mut rng = stage_rng(6, "acceptance-oracle", 0);
    let k3 = Graph::complete(3);
    let corpus = 10_000;
    for i in 0..corpus {
        let g = connected_sample(&mut rng, 9);
        for proper in [false, true] {
            let expected = !oracle::induced_clique_subdivision_sets(&g, 3, proper).is_empty();
            let got = match find_induced_subdivision(&g, &k3, u64::MAX, proper)
                .map_err(|e| e.to_string())
            {
                Ok(FindOutcome::Found(c)) => {
                    let r = verify(&g, &c).map_err(|e| e.to_string())?;
                    if !r.is_induced || (proper && !r.is_proper) {
                        return Err(format!("graph {i}: certificate fails verification"));
                    }
                    true
                }
                Ok(FindOutcome::NoneExists) => false,
                Ok(FindOutcome::BudgetExhausted) => {
                    return Err(format!("graph {i}: budget exhausted"))
                }
                Err(_) if g.n() < 3 => false,
                Err(e) => return Err(e),
            };
            if got != expected {
                return Err(format!(
                    "graph {i} ({:?}) proper={proper}: finder {got}, cycle oracle {expected}",
                    g.edges().collect::<Vec<_>>()
                ));
            }
        }
    }
    let cuts = 1_500;
    for i in 0..cuts {
        let n = rng.random_range(2..=10);
        let g = gnp(n, rng.random_range(0.2..0.95), &mut rng);
        let fast = vertex_connectivity(&g).map_err(|e| e.to_string())?;
        let slow = oracle::min_vertex_cut_size(&g);
        if fast != slow {
            return Err(format!("cut sample {i}: flow {fast}, exhaustive {slow}"));
        }
    }
    let links = 3_000;
    for i in 0..links {
        let n = rng.random_range(4..=10);
        let g = gnp(n, rng.random_range(0.2..0.7), &mut rng);
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let k = rng.random_range(1..=2);
        let pairs: Vec<(usize, usize)> = (0..k).map(|j| (vs[2 * j], vs[2 * j + 1])).collect();
        let expected = oracle::linkable(&g, &pairs);
        let got = match solve_linkage(&g, &pairs, u64::MAX).map_err(|e| e.to_string())? {
            LinkageOutcome::Linked(_) => true,
            LinkageOutcome::Infeasible => false,
            LinkageOutcome::BudgetExhausted => {
                return Err(format!("linkage sample {i}: budget exhausted"))
            }
        };
        if got != expected {
            return Err(format!(
                "linkage sample {i}: solver {got}, enumeration {expected}"
            ));
        }
    }
    Ok(format!(
        "{corpus} finder graphs, {cuts} cut samples, {links} linkage samples agree"
    ))
}

/// Tallies over many seeded pipeline runs.
#[derive(Default)]
struct Tally {
    runs: usize,
    certificates: usize,
    unverified: Vec<String>,
}

impl Tally {
    fn record(
        &mut self,
        label: &str,
        host: &Graph,
        outcome: &Result<SubdivisionCertificate, PipelineError>,
    ) {
        self.runs += 1;
        match outcome {
            Ok(cert) => match verify(host, cert) {
                Ok(r) if r.is_induced && r.is_proper => self.certificates += 1,
                other => self.unverified.push(format!("{label}: {other:?}")),
            },
            Err(e @ PipelineError::Structural { .. }) => {
                self.unverified.push(format!("{label}: {e}"))
            }
            Err(_) => {}
        }
    }
}

/// The high-girth instance for the Mader stage and its parameters: the
/// incidence graph of PG(2,7) blown up with bridges of length 7 has girth
/// 54, above the threshold of 52 for `ell = 3`, `m = 1`.
fn mader_instance() -> Result<(Graph, MaderParameters, Profile), String> {
    let h0 = incidence_graph(&ProjectivePlane::new(7).map_err(|e| e.to_string())?);
    let g = tree_blowup(&h0, 2, 7).graph;
    let profile = Profile {
        mader_overrides: MaderOverrides {
            q: Some(1),
            big_q: Some(2),
            ..Profile::desk().mader_overrides
        },
        ..Profile::desk()
    };
    let params = MaderParameters::compute(
        3,
        BigRational::new(1.into(), 20.into()),
        BigUint::from(g.max_degree().unwrap_or(0)),
        3,
        1,
    )
    .and_then(|p| p.with_overrides(&profile.mader_overrides))
    .map_err(|e| e.to_string())?;
    Ok((g, params, profile))
}

fn pipeline_soundness() -> Verdict {
    let desk = Profile::desk();
    let mut unbalanced = Tally::default();
    for seed in 0..120u64 {
        let inst = hub_graph(11 + (seed % 7) as usize);
        let run = unbalanced_step(
            &inst.graph,
            &inst.wired,
            &inst.hubs,
            3,
            &desk,
            RunOptions::new(seed, 50),
        );
        unbalanced.record("unbalanced_step", &inst.graph, &run.outcome);
    }

    let mut cleaning_runs = 0;
    let mut cleaning_outputs = 0;
    let mut bad_cleaning = Vec::new();
    for seed in 0..100u64 {
        let inst = linear_attachment(200, 80, 4, seed).map_err(|e| e.to_string())?;
        let run = cleaning_step(
            &inst.graph,
            &inst.x,
            &inst.b0,
            4,
            &desk,
            RunOptions::new(seed, 50),
        );
        cleaning_runs += 1;
        match run.outcome {
            Ok(out) if inst.graph.is_independent(&out.y) && !out.y.is_empty() => {
                cleaning_outputs += 1
            }
            Ok(out) => bad_cleaning.push(format!("seed {seed}: Y = {:?}", out.y)),
            Err(e @ PipelineError::Structural { .. }) => {
                bad_cleaning.push(format!("seed {seed}: {e}"))
            }
            Err(_) => {}
        }
    }

    let (mg, params, mprofile) = mader_instance()?;
    let mut mader = Tally::default();
    for seed in 0..100u64 {
        let run = induced_mader(&mg, &params, &mprofile, RunOptions::new(seed, 20));
        mader.record("induced_mader", &mg, &run.outcome);
    }

    let mut hub_cycle_tally = Tally::default();
    let mut padded_tally = Tally::default();
    let padded: Vec<Graph> = (0..5)
        .map(|s| padded_hub_graph(18, s).map(|i| i.graph))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for seed in 0..60u64 {
        let g = &padded[(seed % 5) as usize];
        let run = main_theorem(g, 4, &desk, RunOptions::new(seed, 50));
        padded_tally.record("main_theorem/padded hubs", g, &run.outcome);
    }
    let cycle = hub_cycle(16, 320, 6).map_err(|e| e.to_string())?.graph;
    for seed in 0..40u64 {
        let run = main_theorem(&cycle, 4, &desk, RunOptions::new(seed, 30));
        hub_cycle_tally.record("main_theorem/hub cycle", &cycle, &run.outcome);
    }

    let unverified: Vec<&String> = unbalanced
        .unverified
        .iter()
        .chain(&mader.unverified)
        .chain(&hub_cycle_tally.unverified)
        .chain(&padded_tally.unverified)
        .chain(&bad_cleaning)
        .collect();
    let planted_runs = unbalanced.runs + padded_tally.runs;
    let planted_found = unbalanced.certificates + padded_tally.certificates;
    let rate = planted_found as f64 / planted_runs as f64;
    let summary = format!(
        "unbalanced {}/{}, cleaning {cleaning_outputs}/{cleaning_runs}, mader {}/{}, main_theorem {}/{} (hub cycle) + {}/{} (padded hubs); \
         planted recovery {:.1}%, unverified exits {}",
        unbalanced.certificates,
        unbalanced.runs,
        mader.certificates,
        mader.runs,
        hub_cycle_tally.certificates,
        hub_cycle_tally.runs,
        padded_tally.certificates,
        padded_tally.runs,
        100.0 * rate,
        unverified.len()
    );
    if unverified.is_empty() && rate >= 0.9 {
        Ok(summary)
    } else {
        Err(format!("{summary}; first: {:?}", unverified.first()))
    }
}

/// Every sampling stage that checked R found it independent, and every
/// auxiliary edge list is simple.
fn trace_violations(label: &str, trace: &PipelineTrace, out: &mut Vec<String>) -> usize {
    let mut checked = 0;
    for stage in &trace.stages {
        if let Some(&ok) = stage.checks.get("R independent") {
            checked += 1;
            if !ok {
                out.push(format!("{label} {}: R dependent", stage.name));
            }
        }
        if let Some(edges) = stage.edges.get("H") {
            checked += 1;
            let set: BTreeSet<[usize; 2]> = edges
                .iter()
                .map(|e| [e[0].min(e[1]), e[0].max(e[1])])
                .collect();
            if set.len() != edges.len() || edges.iter().any(|e| e[0] == e[1]) {
                out.push(format!(
                    "{label} {}: auxiliary graph not simple",
                    stage.name
                ));
            }
        }
    }
    checked
}

/// A cycle through at least three vertices, found by a random walk that
/// stops at the first repeated vertex.
fn random_cycle<R: Rng>(h: &Graph, rng: &mut R) -> Option<Vec<usize>> {
    let start = (0..h.n()).find(|&v| h.degree(v) >= 2)?;
    let mut walk = vec![start];
    let mut prev = usize::MAX;
    loop {
        let v = *walk.last().expect("walk is nonempty");
        let choices: Vec<usize> = h
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| w != prev)
            .collect();
        if choices.is_empty() {
            return None;
        }
        let w = choices[rng.random_range(0..choices.len())];
        if let Some(pos) = walk.iter().position(|&x| x == w) {
            let mut cycle = walk[pos..].to_vec();
            cycle.push(w);
            return Some(cycle);
        }
        prev = v;
        walk.push(w);
    }
}

/// The lifted closed walk is a cycle of the host, `factor` times longer.
fn lifts(
    host: &Graph,
    cycle: &[usize],
    connectors: &Connectors,
    factor: usize,
) -> Result<(), String> {
    let lifted = lift_walk(cycle, connectors);
    let distinct: BTreeSet<usize> = lifted[1..].iter().copied().collect();
    if lifted.len() - 1 != factor * (cycle.len() - 1)
        || lifted.first() != lifted.last()
        || distinct.len() != lifted.len() - 1
        || !lifted.windows(2).all(|w| host.has_edge(w[0], w[1]))
    {
        return Err(format!("{cycle:?} lifts to {lifted:?}"));
    }
    Ok(())
}

/// Host with hubs `0..h.n()` and a connector of length `len` per edge of `h`.
fn connector_host(h: &Graph, len: usize) -> (Graph, Connectors) {
    let n = h.n();
    let mut connectors = Connectors::new();
    let mut edges = Vec::new();
    let mut next = n;
    for (u, v) in h.edges() {
        let mut path = vec![u];
        path.extend(next..next + len - 1);
        path.push(v);
        next += len - 1;
        edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        connectors.insert((u, v), path);
    }
    (
        Graph::from_edges(next, edges).expect("connector edges are distinct"),
        connectors,
    )
}

fn property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

/// Structural assertions over seeded corpora and generated properties:
/// R independent and auxiliary graphs simple in every trace, colourings
/// within degeneracy plus one, generated graphs above the Moore bound,
/// auxiliary cycles lifting to host cycles of the right length.
fn structural_invariants() -> Verdict {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let desk = Profile::desk();
    for seed in 0..60u64 {
        let inst = hub_graph(11 + (seed % 7) as usize);
        let run = unbalanced_step(
            &inst.graph,
            &inst.wired,
            &inst.hubs,
            3,
            &desk,
            RunOptions::new(seed, 50),
        );
        checked += trace_violations(
            &format!("unbalanced seed {seed}"),
            &run.trace,
            &mut violations,
        );
        if matches!(run.outcome, Err(PipelineError::Structural { .. })) {
            violations.push(format!("unbalanced seed {seed}: structural error"));
        }
    }
    let cycle = hub_cycle(16, 320, 6).map_err(|e| e.to_string())?.graph;
    for seed in 0..20u64 {
        let run = main_theorem(&cycle, 4, &desk, RunOptions::new(seed, 30));
        checked += trace_violations(&format!("case 1 seed {seed}"), &run.trace, &mut violations);
        if !run.trace.stages.iter().any(|s| s.name == "case1/sampling") {
            violations.push(format!("case 1 seed {seed}: no sampling stage"));
        }
        if matches!(run.outcome, Err(PipelineError::Structural { .. })) {
            violations.push(format!("case 1 seed {seed}: structural error"));
        }
    }

    let moore_ok = |g: &Graph| match (g.min_degree(), girth(g).finite()) {
        (Some(delta), Some(gi)) if delta >= 2 => {
            BigUint::from(g.n())
                >= moore_lower_bound(delta as u64, (gi as u64 - 2) / 2).expect("delta >= 2")
        }
        _ => true,
    };
    let mut generated = 0;
    for (d, n, target) in [
        (3, 30, 6),
        (3, 60, 7),
        (4, 40, 5),
        (4, 80, 6),
        (5, 60, 5),
        (3, 126, 8),
    ] {
        for seed in 0..3 {
            generated += 1;
            match high_girth_regular(d, n, target, seed, 500_000).map_err(|e| e.to_string())? {
                RegularOutcome::Found(g) if girth(&g).at_least(target as u64) && moore_ok(&g) => {}
                RegularOutcome::BelowMooreBound { bound } if BigUint::from(n) < bound => {}
                RegularOutcome::SwapBudgetExhausted { .. } => {}
                other => violations.push(format!(
                    "high_girth_regular({d},{n},{target}) seed {seed}: {other:?}"
                )),
            }
        }
    }
    for s in 0..3 {
        generated += 1;
        if !moore_ok(&padded_hub_graph(18, s).map_err(|e| e.to_string())?.graph) {
            violations.push(format!("padded hubs {s} below the Moore bound"));
        }
    }
    generated += 2;
    if !moore_ok(&cycle) || !moore_ok(&mader_instance()?.0) {
        violations.push("planted instance below the Moore bound".into());
    }

    let hubs = hub_graph(9);
    let mut hub_connectors = Connectors::new();
    for &a in &hubs.wired {
        let ends = hubs.graph.neighbors(a);
        hub_connectors.insert((ends[0], ends[1]), vec![ends[0], a, ends[1]]);
    }
    let mut rng = stage_rng(8, "acceptance-hub-lift", 0);
    for _ in 0..200 {
        let walk = random_cycle(&Graph::complete(9), &mut rng).expect("K9 has cycles");
        if let Err(e) = lifts(&hubs.graph, &walk, &hub_connectors, 2) {
            violations.push(format!("hub graph lift: {e}"));
        }
    }

    let cases = 256;
    let properties = [
        property(
            "greedy colouring",
            cases,
            (1usize..40, 0.05f64..0.6, any::<u64>()),
            |(n, p, seed)| {
                let g = gnp(n, p, &mut stage_rng(seed, "gnp", 0));
                let ord = degeneracy_order(&g);
                let colors = greedy_color(&g, &ord);
                prop_assert!(is_proper_coloring(&g, &colors));
                prop_assert!(color_count(&colors) <= ord.degeneracy + 1);
                Ok(())
            },
        ),
        property(
            "random regular Moore bound",
            cases,
            (2usize..6, 4usize..30, any::<u64>()),
            |(d, half, seed)| {
                let n = 2 * half + d;
                let n = if d * n % 2 == 1 { n + 1 } else { n };
                if let Some(g) = random_regular(d, n, &mut stage_rng(seed, "regular", 0)) {
                    prop_assert!((0..g.n()).all(|v| g.degree(v) == d));
                    prop_assert!(moore_ok(&g));
                }
                Ok(())
            },
        ),
        property(
            "lift through length-2 connectors",
            cases,
            (4usize..14, 0.3f64..0.9, any::<u64>()),
            |(n, p, seed)| {
                let mut rng = stage_rng(seed, "lift2", 0);
                let h = gnp(n, p, &mut rng);
                let (host, connectors) = connector_host(&h, 2);
                if let Some(walk) = random_cycle(&h, &mut rng) {
                    lifts(&host, &walk, &connectors, 2).map_err(TestCaseError::fail)?;
                }
                Ok(())
            },
        ),
        property(
            "lift through length-4 connectors",
            cases,
            (4usize..14, 0.3f64..0.9, any::<u64>()),
            |(n, p, seed)| {
                let mut rng = stage_rng(seed, "lift4", 0);
                let h = gnp(n, p, &mut rng);
                let (host, connectors) = connector_host(&h, 4);
                if let Some(walk) = random_cycle(&h, &mut rng) {
                    lifts(&host, &walk, &connectors, 4).map_err(TestCaseError::fail)?;
                }
                Ok(())
            },
        ),
    ];
    violations.extend(properties.into_iter().filter_map(Result::err));

    if violations.is_empty() {
        Ok(format!(
            "{checked} trace assertions, {generated} generated graphs, 200 hub lifts, 4 properties x {cases} cases, 0 violations"
        ))
    } else {
        Err(format!(
            "{} violations, first: {}",
            violations.len(),
            violations[0]
        ))
    }
}

fn determinism() -> Verdict {
    let hubs = hub_graph(10);
    let padded = padded_hub_graph(18, 0).map_err(|e| e.to_string())?;
    let cycle = hub_cycle(16, 320, 6).map_err(|e| e.to_string())?;
    let attach = linear_attachment(200, 80, 4, 0).map_err(|e| e.to_string())?;
    let descriptors = [
        json!({"op": "unbalanced_step", "graph": GraphJson::from(&hubs.graph), "seed": 11,
               "args": {"a": hubs.wired, "b": hubs.hubs, "d": 3}}),
        json!({"op": "cleaning_step", "graph": GraphJson::from(&attach.graph), "seed": 12,
               "args": {"x": attach.x, "b0": attach.b0, "d": 4}}),
        json!({"op": "main_theorem", "graph": GraphJson::from(&padded.graph), "seed": 13, "args": {"k": 4}}),
        json!({"op": "main_theorem", "graph": GraphJson::from(&cycle.graph), "seed": 14, "args": {"k": 4}}),
        json!({"op": "main_theorem", "graph": GraphJson::from(&Graph::petersen()), "seed": 15, "args": {"k": 3}}),
        json!({"op": "mader_parameters", "args": {"s": 6, "eta": [1, 20], "d_max": BigUint::from(5u32).pow(43).to_string(), "ell": 136, "m": 3423}}),
    ];
    for (i, value) in descriptors.iter().enumerate() {
        let desc: RunDescriptor =
            serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let a = run_descriptor(&desc).map_err(|e| e.to_string())?;
        let b = run_descriptor(&desc).map_err(|e| e.to_string())?;
        let trace = |r: &isubdiv_core::pipeline::RunResult| {
            serde_json::to_vec(&r.trace).expect("trace serializes")
        };
        let cert = |r: &isubdiv_core::pipeline::RunResult| {
            serde_json::to_vec(&r.certificate).expect("certificate serializes")
        };
        if trace(&a) != trace(&b) || cert(&a) != cert(&b) {
            return Err(format!("descriptor {i} ({}) differs between runs", desc.op));
        }
    }
    Ok(format!(
        "{} descriptors produced byte-identical traces and certificates",
        descriptors.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("parameter table", parameter_table),
        ("arc dichotomy", segre),
        ("incidence witness graph", witness_graph),
        ("Petersen induced proper K4", petersen_k4),
        ("verifier mutation suite", mutation_suite),
        ("oracle equivalence", oracle_equivalence),
        ("pipeline soundness", pipeline_soundness),
        ("structural invariants", structural_invariants),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let verdict = check();
        let took = started.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {} {name}: PASS ({took:.1?}) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({took:.1?}) {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
