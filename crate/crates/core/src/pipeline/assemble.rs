use std::collections::BTreeMap;

use super::paths::PathSystem;
use super::witness::BranchWitness;
use super::{ensure_sound, PipelineRun, PipelineTrace, RunOptions};
use crate::connectivity::{solve_linkage, LinkageOutcome};
use crate::error::PipelineError;
use crate::graph::{mask_of, Graph};
use crate::subdivision::{shortest_induced_path, SubdivisionCertificate};

const OP: &str = "assemble_subdivision";

/// Branch selections tried before giving up.
const MAX_SELECTIONS: usize = 32;

/// Auxiliary data the assembly works on. `h` and all vertex lists use the
/// root positions of `ps`.
#[derive(Clone, Copy, Debug)]
pub struct AssemblyInput<'a> {
    pub ps: &'a PathSystem,
    pub h: &'a Graph,
    /// Vertices of the connected block `H'`.
    pub core: &'a [usize],
    /// Witnessed vertices of `H'` with retained degree.
    pub good: &'a [usize],
    pub witnesses: &'a BTreeMap<usize, BranchWitness>,
}

/// Assembles an induced `K_s`-subdivision in `g` from robustly branchable
/// vertices of a connected block of the auxiliary graph.
///
/// Branch vertices form a greedy independent set of `Gamma` (adjacency in
/// `H'` or in `g`). Branch `i` sends its witness classes to the other
/// branches in order and picks a fresh vertex `u_j^(i)` of `H'` from each.
/// The pairs `(u_j^(i), u_i^(j))` are linked in `H' - branches`, each link is
/// expanded through the auxiliary paths, and a shortest path inside the
/// expansion joins the two branches. Up to 32 branch selections are tried;
/// a certificate is returned only after it verifies as induced and proper.
pub fn assemble_subdivision(
    g: &Graph,
    input: AssemblyInput<'_>,
    s: usize,
    linkage_budget: u64,
    opts: RunOptions,
) -> PipelineRun<SubdivisionCertificate> {
    let mut trace = PipelineTrace::new(OP, opts.timings);
    let outcome = run(g, input, s, linkage_budget, &mut trace);
    PipelineRun::finish(trace, outcome)
}

fn run(
    g: &Graph,
    input: AssemblyInput<'_>,
    s: usize,
    linkage_budget: u64,
    trace: &mut PipelineTrace,
) -> Result<SubdivisionCertificate, PipelineError> {
    let AssemblyInput {
        ps,
        h,
        core,
        good,
        witnesses,
    } = input;
    let roots = &ps.roots;
    let hosts = |vs: &[usize]| vs.iter().map(|&v| roots[v]).collect::<Vec<_>>();
    if s < 2 {
        return Err(PipelineError::precondition(
            "branch-selection",
            format!("s must be at least 2, got {s}"),
        ));
    }
    let mut st = trace.open("branch-selection");
    let core_mask = mask_of(h.n(), core);
    let mut candidates: Vec<usize> = good
        .iter()
        .copied()
        .filter(|v| core_mask[*v] && witnesses.contains_key(v))
        .collect();
    candidates.sort_unstable();
    let adjacent = |u: usize, v: usize| h.has_edge(u, v) || g.has_edge(roots[u], roots[v]);
    let mut independent: Vec<usize> = Vec::new();
    for &v in &candidates {
        if independent.iter().all(|&w| !adjacent(v, w)) {
            independent.push(v);
        }
    }
    st.set("good", &hosts(&candidates));
    st.set("Gamma-independent", &hosts(&independent));
    let enough = st.check("|I| >= s", independent.len() >= s);
    trace.close(st);
    if !enough {
        return Err(PipelineError::absent(
            "branch-selection",
            format!(
                "greedy independent set in Gamma has {} < {s} vertices",
                independent.len()
            ),
        ));
    }

    let mut last = String::new();
    let mut selection: Vec<usize> = (0..s).collect();
    for attempt in 0..MAX_SELECTIONS {
        let branch: Vec<usize> = selection.iter().map(|&i| independent[i]).collect();
        let mut st = trace.open("linkage");
        st.attempts(attempt as u32 + 1);
        st.set("branch", &hosts(&branch));
        match try_selection(g, input, &branch, linkage_budget) {
            Ok((cert, ends)) => {
                st.set("u", &hosts(&ends));
                trace.close(st);
                let mut st = trace.open("assembly");
                st.set("certificate", &cert.vertex_set());
                let sound = ensure_sound(g, &cert, "assembly");
                st.check("induced and proper", sound.is_ok());
                trace.close(st);
                match sound {
                    Ok(()) => return Ok(cert),
                    Err(e) => last = e.to_string(),
                }
            }
            Err(reason) => {
                st.warn(reason.clone());
                trace.close(st);
                last = reason;
            }
        }
        if !next_combination(&mut selection, independent.len()) {
            break;
        }
    }
    Err(PipelineError::absent(
        "linkage",
        format!("no branch selection could be linked and verified (last: {last})"),
    ))
}

/// Routes one branch selection. Returns the certificate and the chosen
/// `u_j^(i)` on success, a diagnostic otherwise.
fn try_selection(
    g: &Graph,
    input: AssemblyInput<'_>,
    branch: &[usize],
    linkage_budget: u64,
) -> Result<(SubdivisionCertificate, Vec<usize>), String> {
    let AssemblyInput {
        ps,
        h,
        core,
        witnesses,
        ..
    } = input;
    let s = branch.len();
    let core_mask = mask_of(h.n(), core);
    let branch_mask = mask_of(h.n(), branch);
    let mut used = vec![false; h.n()];
    // ends[i][j]: u_j^(i), the entry point of branch i towards branch j.
    let mut ends = vec![vec![usize::MAX; s]; s];
    for (i, &v) in branch.iter().enumerate() {
        let classes = &witnesses[&v].classes;
        if classes.len() < s - 1 {
            return Err(format!(
                "witness of {} has {} classes, needs {}",
                ps.roots[v],
                classes.len(),
                s - 1
            ));
        }
        let peers = (0..s).filter(|&j| j != i);
        for (class, j) in classes.iter().zip(peers) {
            let Some(&u) = class
                .iter()
                .find(|&&u| core_mask[u] && !branch_mask[u] && !used[u])
            else {
                return Err(format!(
                    "class of {} towards branch {j} has no free vertex of H'",
                    ps.roots[v]
                ));
            };
            used[u] = true;
            ends[i][j] = u;
        }
    }
    let rest: Vec<usize> = core.iter().copied().filter(|&v| !branch_mask[v]).collect();
    let sub = h.induced_subgraph(&rest);
    let local = sub.local_index(h.n());
    let mut pairs = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            pairs.push((
                local[ends[i][j]].expect("ends lie in H'"),
                local[ends[j][i]].expect("ends lie in H'"),
            ));
        }
    }
    let links = match solve_linkage(&sub.graph, &pairs, linkage_budget) {
        Ok(LinkageOutcome::Linked(paths)) => paths,
        Ok(LinkageOutcome::Infeasible) => {
            return Err("H'' - branches is not linked for these ends".into())
        }
        Ok(LinkageOutcome::BudgetExhausted) => return Err("linkage budget exhausted".into()),
        Err(e) => return Err(e.to_string()),
    };
    let mut paths = BTreeMap::new();
    let mut k = 0;
    for i in 0..s {
        for j in i + 1..s {
            let link = sub.map_to_host(&links[k]);
            k += 1;
            let mut y_mask = vec![false; g.n()];
            let mut mark = |p: Vec<usize>| p.into_iter().for_each(|x| y_mask[x] = true);
            mark(ps.path(branch[i], ends[i][j]));
            mark(ps.path(branch[j], ends[j][i]));
            for w in link.windows(2) {
                mark(ps.path(w[0], w[1]));
            }
            let (vi, vj) = (ps.roots[branch[i]], ps.roots[branch[j]]);
            let r = shortest_induced_path(g, &y_mask, vi, vj)
                .ok_or_else(|| format!("expansion of link {i}-{j} is disconnected"))?;
            paths.insert((i, j), r);
        }
    }
    let cert = SubdivisionCertificate {
        pattern: Graph::complete(s),
        branch: branch.iter().map(|&v| ps.roots[v]).collect(),
        paths,
    };
    let flat: Vec<usize> = (0..s)
        .flat_map(|i| (0..s).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| ends[i][j])
        .collect();
    Ok((cert, flat))
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic
/// order; false after the last one.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::paths::{build_path_system, AuxSample};
    use crate::pipeline::witness::{branch_witnesses, SeparationBudget};
    use crate::planted::tree_blowup;
    use crate::rng::stage_rng;

    #[test]
    fn combinations_in_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
    }

    fn blowup_input(s: usize) -> (Graph, PathSystem, Graph, BTreeMap<usize, BranchWitness>) {
        let planted = tree_blowup(&Graph::complete_bipartite(8, 8), 2, 1);
        let ps = build_path_system(&planted.graph, &planted.hubs, 5).unwrap();
        let h = AuxSample::from_chosen(&ps, &vec![true; ps.roots.len()]).h;
        let mut rng = stage_rng(0, "test-assemble", 0);
        let budget = SeparationBudget {
            pair_cap: 10_000,
            spot_checks: 10,
        };
        let w = branch_witnesses(&planted.graph, &ps, &h, s - 1, 2, budget, &mut rng);
        (planted.graph, ps, h, w)
    }

    #[test]
    fn planted_triangle_is_recovered() {
        let (g, ps, h, w) = blowup_input(3);
        let all: Vec<usize> = (0..ps.roots.len()).collect();
        let input = AssemblyInput {
            ps: &ps,
            h: &h,
            core: &all,
            good: &all,
            witnesses: &w,
        };
        let run = assemble_subdivision(&g, input, 3, 100_000, RunOptions::default());
        let cert = run.outcome.expect("certificate");
        assert_eq!(cert.pattern.n(), 3);
        ensure_sound(&g, &cert, "t").unwrap();
    }

    #[test]
    fn too_few_witnessed_vertices() {
        let (g, ps, h, w) = blowup_input(3);
        let two: Vec<usize> = vec![0, 1];
        let input = AssemblyInput {
            ps: &ps,
            h: &h,
            core: &two,
            good: &two,
            witnesses: &w,
        };
        let run = assemble_subdivision(&g, input, 3, 100_000, RunOptions::default());
        assert!(matches!(run.outcome, Err(PipelineError::Absent { .. })));
        assert_eq!(run.trace.failed_stage.as_deref(), Some("branch-selection"));
    }
}
