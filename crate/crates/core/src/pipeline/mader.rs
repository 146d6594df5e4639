use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::assemble::{assemble_subdivision, AssemblyInput};
use super::paths::{build_path_system, sample_aux_graph, separated_roots, PathSystem};
use super::retained::core_with_retained_degrees;
use super::witness::{branch_witnesses, SeparationBudget};
use super::{
    ensure_sound, girth_gate, MaderParameters, PipelineRun, PipelineTrace, Profile, RunOptions,
};
use crate::error::PipelineError;
use crate::graph::{mask_of, Graph, InducedSubgraph};
use crate::rng::stage_rng;
use crate::subdivision::SubdivisionCertificate;

const OP: &str = "induced_mader";

/// Pairs of vertex-disjoint auxiliary edges whose paths are re-checked for
/// disjointness and anticompleteness per sample.
const DISJOINTNESS_CHECKS: usize = 2_000;

/// Deletes one vertex at a time, always the smallest index whose deletion
/// keeps `e > alpha * |V|`, until no single deletion does. Returns the
/// surviving vertices, sorted.
pub fn minimal_reduction(j: &Graph, alpha: &BigRational) -> Vec<usize> {
    let n = j.n();
    let (num, den) = (alpha.numer().clone(), alpha.denom().clone());
    let mut alive = vec![true; n];
    let mut deg = j.degrees();
    let mut edges = j.m();
    let mut count = n;
    // e' > alpha * n'  <=>  e' * den > num * n'.
    let keeps = |e: usize, c: usize| BigInt::from(e) * &den > &num * BigInt::from(c);
    loop {
        let next = (0..n).find(|&v| alive[v] && count > 1 && keeps(edges - deg[v], count - 1));
        let Some(v) = next else { break };
        alive[v] = false;
        edges -= deg[v];
        count -= 1;
        for &w in j.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// An induced `K_s`-subdivision in a graph of bounded degree, average
/// degree above `s - 2 + eta` and large girth.
///
/// Optionally passes to a vertex-minimal subgraph, takes separated roots
/// seeded by the vertices of degree at least `a = s - 1`, builds the path
/// system, and samples roots with probability `p` until every sampled seed
/// root `y` has `a` neighbors `z` each carrying at least `Q` auxiliary edges
/// (no bad event). Robustly branchable vertices feed the retained-degree
/// core with `k = q` and `D = D0`, and the assembly links branch vertices
/// chosen there. Every attempt after the path system is repeated up to
/// `retries` times.
pub fn induced_mader(
    j: &Graph,
    params: &MaderParameters,
    profile: &Profile,
    opts: RunOptions,
) -> PipelineRun<SubdivisionCertificate> {
    let mut trace = PipelineTrace::new(OP, opts.timings);
    let outcome = run(j, params, profile, opts, &mut trace);
    PipelineRun::finish(trace, outcome)
}

fn run(
    j: &Graph,
    params: &MaderParameters,
    profile: &Profile,
    opts: RunOptions,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let n = j.n();
    let pre = |msg: String| PipelineError::precondition("preconditions", msg);
    let s = params.s as usize;
    let a = params.a as usize;
    let mut st = trace.open("preconditions");
    st.value("parameters", params.summary());
    let max_deg = j.max_degree().unwrap_or(0);
    let degree_ok = st.check("max degree <= D", BigUint::from(max_deg) <= params.d_max);
    // 2e / n > s - 2 + eta
    let target = BigRational::from_integer(BigInt::from(s) - 2) + &params.eta;
    let dense = n > 0 && BigRational::new(BigInt::from(2 * j.m()), BigInt::from(n)) > target;
    let dense_ok = st.check("d(J) > s - 2 + eta", dense);
    if !degree_ok {
        trace.close(st);
        return Err(pre(format!(
            "maximum degree {max_deg} exceeds D = {}",
            params.d_max
        )));
    }
    if !dense_ok {
        trace.close(st);
        return Err(pre(format!(
            "average degree is not above s - 2 + eta = {target}"
        )));
    }
    let girth_ok = match girth_gate(j, params.girth_threshold, profile.relax_girth, &mut st) {
        Ok(held) => held,
        Err(msg) => {
            trace.close(st);
            return Err(pre(msg));
        }
    };
    if !st.check("parameters feasible", params.feasible()) {
        st.warn(format!(
            "parameters violate: {}",
            params.violated().join("; ")
        ));
    }
    trace.close(st);

    let mut st = trace.open("reduction");
    let kept: Vec<usize> = if profile.minimal_reduction {
        minimal_reduction(j, &params.alpha)
    } else {
        (0..n).collect()
    };
    let jj: InducedSubgraph = j.induced_subgraph(&kept);
    st.value("enabled", profile.minimal_reduction);
    st.set("kept", &kept);
    trace.close(st);
    let g = &jj.graph;

    let mut st = trace.open("roots");
    let u_set: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) >= a).collect();
    let roots = separated_roots(g, params.ell as usize, &u_set);
    let u_mask = mask_of(g.n(), &u_set);
    let u_prime: Vec<usize> = roots.iter().copied().filter(|&r| u_mask[r]).collect();
    st.set("U", &jj.map_to_host(&u_set));
    st.set("U'", &jj.map_to_host(&u_prime));
    st.set("S*", &jj.map_to_host(&roots));
    st.check(
        "|U'| >= c0 |J|",
        BigRational::from_integer(BigInt::from(u_prime.len())) >= &params.c0 * BigInt::from(g.n()),
    );
    trace.close(st);
    if u_prime.is_empty() {
        return Err(PipelineError::absent(
            "roots",
            "no vertex of degree at least a",
        ));
    }

    let mut st = trace.open("path-system");
    let ps = match build_path_system(g, &roots, params.big_l as usize) {
        Ok(ps) => ps,
        Err(e) => {
            trace.close(st);
            return Err(e);
        }
    };
    let root_host = |i: usize| jj.to_host(ps.roots[i]);
    st.edges(
        "H*",
        ps.aux.edges().map(|(u, v)| (root_host(u), root_host(v))),
    );
    st.value("conflict_bound", ps.conflict_bound);
    if !ps.skipped_non_induced.is_empty() {
        st.warn(format!(
            "{} root pairs joined by a non-induced path were left out",
            ps.skipped_non_induced.len()
        ));
    }
    trace.close(st);

    let mut last_failure = None;
    for attempt in 0..opts.retries {
        let mut sub = PipelineTrace::new(OP, opts.timings);
        let ctx = Attempt {
            j,
            jj: &jj,
            ps: &ps,
            u_prime: &u_prime,
            params,
            profile,
            opts,
            girth_ok,
        };
        match ctx.run(attempt, &mut sub) {
            Ok(cert) => {
                trace.stages.append(&mut sub.stages);
                return Ok(cert);
            }
            Err(e @ PipelineError::Structural { .. }) => {
                trace.stages.append(&mut sub.stages);
                trace.failed_stage = sub.failed_stage;
                return Err(e);
            }
            Err(e) => last_failure = Some((e, sub)),
        }
    }
    match last_failure {
        Some((e, mut sub)) => {
            trace.stages.append(&mut sub.stages);
            trace.failed_stage = sub.failed_stage;
            Err(e)
        }
        None => Err(PipelineError::absent(
            "sampling",
            "no attempts allowed (retries = 0)",
        )),
    }
}

struct Attempt<'a> {
    j: &'a Graph,
    jj: &'a InducedSubgraph,
    ps: &'a PathSystem,
    u_prime: &'a [usize],
    params: &'a MaderParameters,
    profile: &'a Profile,
    opts: RunOptions,
    girth_ok: bool,
}

impl Attempt<'_> {
    fn run(
        &self,
        attempt: u32,
        trace: &mut PipelineTrace,
    ) -> Result<SubdivisionCertificate, PipelineError> {
        let (g, ps, params) = (&self.jj.graph, self.ps, self.params);
        let a = params.a as usize;
        let big_q = params.big_q as usize;
        let root_host = |i: usize| self.jj.to_host(ps.roots[i]);
        let hosts = |vs: &[usize]| vs.iter().map(|&i| root_host(i)).collect::<Vec<_>>();

        let mut st = trace.open("sampling");
        st.attempts(attempt + 1);
        let mut rng = stage_rng(self.opts.seed, "mader-sample", attempt);
        let sample = sample_aux_graph(ps, params.p_f64(), &mut rng);
        let h = &sample.h;
        st.set("S", &hosts(&sample.chosen));
        st.edges("H", h.edges().map(|(u, v)| (root_host(u), root_host(v))));
        let violation = sample.disjointness_violation(g, ps, DISJOINTNESS_CHECKS, &mut rng);
        if !st.check("disjoint H-edges have separated paths", violation.is_none()) {
            let ((u, v), (x, y)) = violation.expect("violation present");
            let msg = format!(
                "paths of H-edges {}-{} and {}-{} touch",
                root_host(u),
                root_host(v),
                root_host(x),
                root_host(y)
            );
            if self.girth_ok {
                trace.close(st);
                return Err(PipelineError::structural("sampling", msg));
            }
            st.warn(msg);
        }
        let chosen_mask = mask_of(ps.roots.len(), &sample.chosen);
        let root_pos: BTreeMap<usize, usize> =
            ps.roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let seeds: Vec<usize> = self
            .u_prime
            .iter()
            .map(|r| root_pos[r])
            .filter(|&i| chosen_mask[i])
            .collect();
        let bad: Vec<usize> = seeds
            .iter()
            .copied()
            .filter(|&y| !carries(ps, h, y, a, big_q))
            .collect();
        st.set("U' & S", &hosts(&seeds));
        st.set("bad", &hosts(&bad));
        st.check(
            "|U' & S| >= p c0 |J| / 2",
            BigRational::from_integer(BigInt::from(2 * seeds.len()))
                >= &params.p * &params.c0 * BigInt::from(g.n()),
        );
        let ok = st.check("no bad event", bad.is_empty())
            && st.check("U' & S nonempty", !seeds.is_empty());
        trace.close(st);
        if !ok {
            return Err(PipelineError::absent(
                "sampling",
                format!(
                    "bad events at {} of {} sampled seed roots",
                    bad.len(),
                    seeds.len()
                ),
            ));
        }

        let mut st = trace.open("witnesses");
        let mut wrng = stage_rng(self.opts.seed, "mader-witness", attempt);
        let budget = SeparationBudget {
            pair_cap: self.profile.witness_pair_cap,
            spot_checks: self.profile.witness_spot_checks,
        };
        let witnesses = branch_witnesses(g, ps, h, a, big_q, budget, &mut wrng);
        let b_h: Vec<usize> = witnesses.keys().copied().collect();
        st.set("B_H", &hosts(&b_h));
        st.check(
            "U' & S within B_H",
            seeds.iter().all(|y| witnesses.contains_key(y)),
        );
        trace.close(st);

        let h_s = h.induced_subgraph(&sample.chosen);
        let local = h_s.local_index(h.n());
        let b_local: Vec<usize> = b_h.iter().filter_map(|&y| local[y]).collect();
        let to_j: Vec<usize> = h_s.host_of.iter().map(|&i| root_host(i)).collect();
        let d0 = params.d0.to_u64().unwrap_or(u64::MAX);
        let core_run = core_with_retained_degrees(
            &h_s.graph,
            params.q as usize,
            d0,
            params.m,
            &b_local,
            self.profile,
            self.opts,
        );
        trace.absorb("core", core_run.trace, &to_j);
        let core = core_run.outcome?;
        let block: Vec<usize> = h_s.map_to_host(&core.block.vertices);
        let good: Vec<usize> = h_s.map_to_host(&core.retained);

        let input = AssemblyInput {
            ps,
            h,
            core: &block,
            good: &good,
            witnesses: &witnesses,
        };
        let assembled = assemble_subdivision(
            g,
            input,
            params.s as usize,
            self.profile.linkage_budget,
            self.opts,
        );
        trace.absorb("assemble", assembled.trace, &self.jj.host_of);
        let cert = assembled.outcome?.relabel(&self.jj.host_of);
        let mut st = trace.open("verify");
        let sound = ensure_sound(self.j, &cert, "verify");
        st.check("induced and proper", sound.is_ok());
        trace.close(st);
        sound.map(|()| cert)
    }
}

/// Whether at least `a` neighbors `z` of root `y` each lie on `P_{y y'}` for
/// at least `big_q` neighbors `y'` of `y` in `h`.
fn carries(ps: &PathSystem, h: &Graph, y: usize, a: usize, big_q: usize) -> bool {
    let mut per_z: BTreeMap<usize, usize> = BTreeMap::new();
    for &w in h.neighbors(y) {
        *per_z.entry(ps.path(y, w)[1]).or_default() += 1;
    }
    per_z.values().filter(|&&c| c >= big_q).count() >= a
}
