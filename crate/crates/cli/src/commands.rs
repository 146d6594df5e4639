use std::path::Path;

use anyhow::anyhow;
use isubdiv_core::connectivity::vertex_connectivity;
use isubdiv_core::extremal::{
    high_girth_regular, incidence_graph, ProjectivePlane, RegularOutcome,
};
use isubdiv_core::format::{from_graph6, save_graph, to_graph6, Format};
use isubdiv_core::invariants::{degeneracy_order, girth, moore_lower_bound};
use isubdiv_core::oracle::{has_induced_cycle, induced_cycle_sets};
use isubdiv_core::pipeline::{parse_descriptor, run_descriptor};
use isubdiv_core::rng::{gnp, stage_rng};
use isubdiv_core::subdivision::{clique_pattern, find_induced_subdivision, verify, FindOutcome};
use isubdiv_core::{Graph, SubdivisionCertificate};
use num_bigint::BigUint;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::io::{json_line, read_graph, read_input, write_output, Exit, Failure};
use crate::{relax_girth, Command, Construct, Invariant, Resolved};

/// Largest graph the exhaustive oracle accepts.
const ORACLE_MAX_N: usize = 20;

pub fn run(command: &Command, config: &Resolved) -> Result<Exit, Failure> {
    match command {
        Command::Verify { certificate, graph } => verify_cmd(certificate, graph, config),
        Command::Find { graph, s, out } => find(graph, *s, out.as_deref(), config),
        Command::Construct { what } => construct(what, config),
        Command::Invariants { graph, only } => invariants(graph, only, config),
        Command::Pipeline {
            descriptor,
            trace,
            certificate,
        } => pipeline(descriptor, trace.as_deref(), certificate.as_deref(), config),
        Command::OracleDiff {
            corpus,
            count,
            max_n,
        } => oracle_diff(corpus.as_deref(), *count, *max_n, config),
    }
}

/// The certificate is a subdivision and induced, and proper if required.
fn accepted(host: &Graph, cert: &SubdivisionCertificate, proper: bool) -> Result<bool, Failure> {
    let report = verify(host, cert).map_err(Failure::malformed)?;
    Ok(report.is_subdivision && report.is_induced && (report.is_proper || !proper))
}

fn verify_cmd(cert_path: &Path, graph_path: &Path, config: &Resolved) -> Result<Exit, Failure> {
    let bytes = read_input(cert_path)?;
    let host = read_graph(graph_path, config.flags.format)?;
    let cert = SubdivisionCertificate::from_json_bytes(&bytes)
        .map_err(|e| Failure::malformed(anyhow!("{}: {e}", cert_path.display())))?;
    let report = verify(&host, &cert).map_err(Failure::malformed)?;
    write_output(None, &json_line(&report))?;
    let ok =
        report.is_subdivision && report.is_induced && (report.is_proper || !config.flags.proper);
    Ok(if ok { Exit::Success } else { Exit::Negative })
}

fn find(
    graph_path: &Path,
    s: usize,
    out: Option<&Path>,
    config: &Resolved,
) -> Result<Exit, Failure> {
    if s < 3 {
        return Err(Failure::malformed(anyhow!("s must be at least 3, got {s}")));
    }
    let host = read_graph(graph_path, config.flags.format)?;
    let budget = config.budget();
    let outcome = find_induced_subdivision(&host, &clique_pattern(s), budget, config.flags.proper)
        .map_err(Failure::malformed)?;
    match outcome {
        FindOutcome::Found(cert) => {
            if !accepted(&host, &cert, config.flags.proper)? {
                return Err(Failure {
                    exit: Exit::Negative,
                    error: anyhow!("finder returned a certificate that does not verify"),
                });
            }
            let mut bytes = cert.to_json_string().into_bytes();
            bytes.push(b'\n');
            write_output(out, &bytes)?;
            Ok(Exit::Success)
        }
        FindOutcome::NoneExists => {
            write_output(None, b"none (search completed)\n")?;
            Ok(Exit::Negative)
        }
        FindOutcome::BudgetExhausted => {
            write_output(
                None,
                format!("none (budget of {budget} exhausted)\n").as_bytes(),
            )?;
            Ok(Exit::Budget)
        }
    }
}

fn construct(what: &Construct, config: &Resolved) -> Result<Exit, Failure> {
    let format = config.flags.format.unwrap_or(Format::Graph6);
    match what {
        Construct::Plane { q, out } => {
            let plane = ProjectivePlane::new(*q).map_err(Failure::malformed)?;
            write_output(out.as_deref(), &json_line(&plane.to_json()))?;
            Ok(Exit::Success)
        }
        Construct::Incidence { q, out } => {
            let plane = ProjectivePlane::new(*q).map_err(Failure::malformed)?;
            write_output(
                out.as_deref(),
                &save_graph(&incidence_graph(&plane), format),
            )?;
            Ok(Exit::Success)
        }
        Construct::Regular {
            d,
            n,
            girth,
            swaps,
            out,
        } => {
            match high_girth_regular(*d, *n, *girth, config.seed, *swaps)
                .map_err(Failure::malformed)?
            {
                RegularOutcome::Found(g) => {
                    write_output(out.as_deref(), &save_graph(&g, format))?;
                    Ok(Exit::Success)
                }
                RegularOutcome::BelowMooreBound { bound } => {
                    eprintln!(
                        "impossible: girth {girth} with degree {d} needs at least {bound} vertices"
                    );
                    Ok(Exit::Negative)
                }
                RegularOutcome::SwapBudgetExhausted { best_girth } => {
                    eprintln!("swap budget exhausted at girth {best_girth}");
                    Ok(Exit::Budget)
                }
            }
        }
    }
}

fn invariants(graph_path: &Path, only: &[Invariant], config: &Resolved) -> Result<Exit, Failure> {
    let g = read_graph(graph_path, config.flags.format)?;
    let wanted = |i: Invariant| only.is_empty() || only.contains(&i);
    let mut report = Map::new();
    report.insert("n".into(), json!(g.n()));
    report.insert("m".into(), json!(g.m()));
    let shortest = girth(&g);
    if wanted(Invariant::Girth) {
        report.insert("girth".into(), json!(shortest.finite()));
    }
    if wanted(Invariant::Degeneracy) {
        report.insert("degeneracy".into(), json!(degeneracy_order(&g).degeneracy));
    }
    if wanted(Invariant::Connectivity) {
        let kappa = vertex_connectivity(&g).map_err(Failure::malformed)?;
        report.insert("connectivity".into(), json!(kappa));
    }
    if wanted(Invariant::Moore) {
        // The least order of a graph with this minimum degree and girth.
        let moore = match (g.min_degree(), shortest.finite()) {
            (Some(delta), Some(gi)) if delta >= 2 => {
                let m = (gi as u64 - 2) / 2;
                let bound = moore_lower_bound(delta as u64, m).map_err(Failure::malformed)?;
                json!({"min_degree": delta, "girth": gi, "bound": bound.to_string(), "satisfied": BigUint::from(g.n()) >= bound})
            }
            _ => Value::Null,
        };
        report.insert("moore".into(), moore);
    }
    write_output(None, &json_line(&report))?;
    Ok(Exit::Success)
}

fn pipeline(
    desc_path: &Path,
    trace_path: Option<&Path>,
    cert_path: Option<&Path>,
    config: &Resolved,
) -> Result<Exit, Failure> {
    let bytes = read_input(desc_path)?;
    let mut desc = parse_descriptor(&bytes).map_err(Failure::malformed)?;
    if config.flags.profile.is_some() {
        desc.profile = config.profile_spec.clone();
    } else if config.flags.relax_girth {
        desc.profile = relax_girth(desc.profile);
    }
    if let Some(seed) = config.flags.seed {
        desc.seed = seed;
    }
    if let Some(retries) = config.flags.retries {
        desc.retries = retries;
    }
    desc.timings |= config.flags.timings;
    let mut result = run_descriptor(&desc).map_err(Failure::malformed)?;

    let mut verified = None;
    if let Some(value) = &result.certificate {
        let host = desc
            .graph
            .clone()
            .map(Graph::try_from)
            .transpose()
            .map_err(Failure::malformed)?;
        let cert = SubdivisionCertificate::from_json_bytes(value.to_string().as_bytes())
            .map_err(Failure::malformed)?;
        match host {
            Some(host) if accepted(&host, &cert, true)? => verified = Some(cert),
            _ => {
                result.certificate = None;
                result.status = "unverified".into();
                result.error = Some("certificate failed re-verification".into());
            }
        }
    }
    write_output(trace_path, &json_line(&result))?;
    if let (Some(cert), Some(path)) = (&verified, cert_path) {
        let mut bytes = cert.to_json_string().into_bytes();
        bytes.push(b'\n');
        write_output(Some(path), &bytes)?;
    }
    if result.succeeded() {
        return Ok(Exit::Success);
    }
    eprintln!(
        "{} failed at stage {}: {}",
        result.op,
        result.failed_stage.as_deref().unwrap_or("-"),
        result.error.as_deref().unwrap_or(&result.status)
    );
    Ok(if result.status == "parameters" {
        Exit::Malformed
    } else {
        Exit::Negative
    })
}

fn random_connected<R: Rng>(rng: &mut R, max_n: usize) -> Graph {
    loop {
        let n = rng.random_range(1..=max_n);
        let g = gnp(n, rng.random_range(0.15..0.85), rng);
        if g.components().len() == 1 {
            return g;
        }
    }
}

fn oracle_diff(
    corpus: Option<&Path>,
    count: usize,
    max_n: usize,
    config: &Resolved,
) -> Result<Exit, Failure> {
    let graphs: Vec<Graph> = match corpus {
        Some(path) => {
            let text = String::from_utf8(read_input(path)?).map_err(Failure::malformed)?;
            text.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    from_graph6(l.as_bytes())
                        .map_err(|e| Failure::malformed(anyhow!("{}: {e}", path.display())))
                })
                .collect::<Result<_, _>>()?
        }
        None => {
            if max_n == 0 || max_n > ORACLE_MAX_N {
                return Err(Failure::malformed(anyhow!(
                    "--max-n must be in 1..={ORACLE_MAX_N}"
                )));
            }
            let mut rng = stage_rng(config.seed, "oracle-diff", 0);
            (0..count)
                .map(|_| random_connected(&mut rng, max_n))
                .collect()
        }
    };
    if let Some(g) = graphs.iter().find(|g| g.n() > ORACLE_MAX_N) {
        return Err(Failure::malformed(anyhow!(
            "corpus graph on {} vertices exceeds the oracle limit {ORACLE_MAX_N}",
            g.n()
        )));
    }
    let triangle = clique_pattern(3);
    let budget = config.budget();
    let mut disagreements = Vec::new();
    let mut exhausted = 0usize;
    for g in &graphs {
        for proper in [false, true] {
            // Proper subdivisions of K_3 are chordless cycles of length >= 6.
            let expected = if proper {
                induced_cycle_sets(g).iter().any(|s| s.count_ones() >= 6)
            } else {
                has_induced_cycle(g)
            };
            let got = if g.n() < 3 {
                Some(false)
            } else {
                match find_induced_subdivision(g, &triangle, budget, proper)
                    .map_err(Failure::malformed)?
                {
                    FindOutcome::Found(cert) => Some(accepted(g, &cert, proper)?),
                    FindOutcome::NoneExists => Some(false),
                    FindOutcome::BudgetExhausted => None,
                }
            };
            match got {
                None => exhausted += 1,
                Some(found) if found != expected => disagreements.push(json!({
                    "graph6": to_graph6(g), "proper": proper, "finder": found, "oracle": expected,
                })),
                Some(_) => {}
            }
        }
    }
    let report = json!({
        "graphs": graphs.len(),
        "comparisons": 2 * graphs.len(),
        "disagreements": disagreements,
        "budget_exhausted": exhausted,
    });
    write_output(None, &json_line(&report))?;
    Ok(if !disagreements.is_empty() {
        Exit::Negative
    } else if exhausted > 0 {
        Exit::Budget
    } else {
        Exit::Success
    })
}
