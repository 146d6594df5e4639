use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{at_least, girth_gate, PipelineRun, PipelineTrace, Profile, RunOptions};
use crate::error::PipelineError;
use crate::graph::{mask_of, members, Graph};
use crate::invariants::{degeneracy_order, greedy_color};
use crate::rng::stage_rng;

const OP: &str = "cleaning_step";

/// `X'` and `Y` of the cleaning step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningOutput {
    pub x_prime: Vec<usize>,
    pub y: Vec<usize>,
}

/// Cleans a large set `X` whose members each see `B0` into a low-degree
/// half `X'` and an independent set `Y` outside it whose members have
/// between 2 and `kappa` neighbors in `X'`.
///
/// `Z` keeps the members of `X` of degree at most `delta0 = 800d`; `X'` is a
/// uniformly random half of `Z`. `U` collects the vertices outside `X'` with
/// at least two neighbors in it, `U'` those with more than `kappa =
/// 3 * 10^7 d^4`, and `Y` is a largest colour class of a greedy colouring of
/// `G[U \ U']`. The halving is repeated until the cut inequality and
/// conclusion (i) hold. Conclusions (ii) to (iv) are re-checked and a
/// violation is a structural error.
pub fn cleaning_step(
    g: &Graph,
    x_set: &[usize],
    b0: &[usize],
    d: usize,
    profile: &Profile,
    opts: RunOptions,
) -> PipelineRun<CleaningOutput> {
    let mut trace = PipelineTrace::new(OP, opts.timings);
    let outcome = run(g, x_set, b0, d, profile, opts, &mut trace);
    PipelineRun::finish(trace, outcome)
}

fn run(
    g: &Graph,
    x_set: &[usize],
    b0: &[usize],
    d: usize,
    profile: &Profile,
    opts: RunOptions,
    trace: &mut PipelineTrace,
) -> Result<CleaningOutput, PipelineError> {
    let n = g.n();
    let pre = |msg: String| PipelineError::precondition("preconditions", msg);
    if d < 4 {
        return Err(pre(format!("d must be at least 4, got {d}")));
    }
    if let Some(&v) = x_set.iter().chain(b0).find(|&&v| v >= n) {
        return Err(pre(format!("vertex {v} out of range")));
    }
    let x_mask = mask_of(n, x_set);
    let b0_mask = mask_of(n, b0);
    if b0.iter().any(|&b| x_mask[b]) {
        return Err(pre("B0 intersects X".into()));
    }
    let mut st = trace.open("preconditions");
    st.set("X", x_set);
    st.set("B0", b0);
    let degeneracy = degeneracy_order(g).degeneracy;
    st.value("degeneracy", degeneracy);
    let checks: [(&str, bool, String); 4] = [
        (
            "d-degenerate",
            degeneracy <= d,
            format!("graph is {degeneracy}-degenerate, not {d}-degenerate"),
        ),
        (
            "|X| >= fraction n",
            at_least(x_set.len() as u128, profile.cleaning_fraction, n as u128),
            format!(
                "|X| = {} is below {}/{} of n = {n}",
                x_set.len(),
                profile.cleaning_fraction[0],
                profile.cleaning_fraction[1]
            ),
        ),
        (
            "every x sees B0",
            x_set.iter().all(|&x| g.degree_into(x, &b0_mask) >= 1),
            "some vertex of X has no neighbor in B0".into(),
        ),
        (
            "every x has degree >= d",
            x_set.iter().all(|&x| g.degree(x) >= d),
            format!("some vertex of X has degree below {d}"),
        ),
    ];
    for (name, holds, msg) in checks {
        if !st.check(name, holds) {
            trace.close(st);
            return Err(pre(msg));
        }
    }
    if let Err(msg) = girth_gate(g, profile.step_girth, profile.relax_girth, &mut st) {
        trace.close(st);
        return Err(pre(msg));
    }
    trace.close(st);

    let delta0 = profile.delta0_factor as usize * d;
    let kappa = profile.kappa_factor as u128 * (d as u128).pow(4);
    let mut st = trace.open("low-degree");
    let z: Vec<usize> = x_set
        .iter()
        .copied()
        .filter(|&x| g.degree(x) <= delta0)
        .collect();
    st.set("Z", &z);
    st.value("delta0", delta0);
    st.check("|Z| >= (fraction - 1/400) n", {
        let [num, den] = profile.cleaning_fraction;
        400 * den as u128 * z.len() as u128 >= (400 * num as u128 - den as u128) * n as u128
    });
    trace.close(st);

    let mut last = None;
    for attempt in 0..opts.retries {
        let mut st = trace.open("halving");
        st.attempts(attempt + 1);
        let mut rng = stage_rng(opts.seed, "cleaning-halving", attempt);
        let z1: Vec<usize> = z.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let z1_mask = mask_of(n, &z1);
        let cut: usize = z1
            .iter()
            .map(|&v| g.degree(v) - g.degree_into(v, &z1_mask))
            .sum();
        let cut_ok = st.check("e(Z1, V - Z1) >= (d+1)|Z|/4", 4 * cut >= (d + 1) * z.len());
        let u: Vec<usize> = (0..n)
            .filter(|&v| !z1_mask[v] && g.degree_into(v, &z1_mask) >= 2)
            .collect();
        let u_prime: Vec<usize> = u
            .iter()
            .copied()
            .filter(|&v| g.degree_into(v, &z1_mask) as u128 > kappa)
            .collect();
        let u_prime_mask = mask_of(n, &u_prime);
        let rest: Vec<usize> = u.iter().copied().filter(|&v| !u_prime_mask[v]).collect();
        let sub = g.induced_subgraph(&rest);
        let colors = greedy_color(&sub.graph, &degeneracy_order(&sub.graph));
        let classes = colors.iter().copied().max().map_or(0, |c| c + 1);
        let mut sizes = vec![0usize; classes];
        for &c in &colors {
            sizes[c] += 1;
        }
        let best = (0..classes).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)));
        let y: Vec<usize> = match best {
            Some(c) => (0..rest.len())
                .filter(|&v| colors[v] == c)
                .map(|v| sub.to_host(v))
                .collect(),
            None => Vec::new(),
        };
        let [bn, bd] = profile.cleaning_beta;
        let dd = d as u128;
        let size_ok = st.check(
            "(i) |Y| >= beta n/(d^3(d+1))",
            y.len() as u128 * dd.pow(3) * (dd + 1) * bd as u128 >= bn as u128 * n as u128,
        );
        st.set("X'", &z1);
        st.set("U", &u);
        st.set("U'", &u_prime);
        st.set("Y", &y);
        trace.close(st);
        if cut_ok && size_ok && !y.is_empty() {
            let mut st = trace.open("conclusions");
            let out = CleaningOutput { x_prime: z1, y };
            let result = check_conclusions(g, &out, d, delta0, kappa, &mut st);
            trace.close(st);
            return result.map(|()| out);
        }
        last = Some((y.len(), cut));
    }
    Err(PipelineError::absent(
        "halving",
        match last {
            Some((y, cut)) => format!("no halving met the cut inequality and conclusion (i) (last: |Y| = {y}, cut = {cut})"),
            None => "no attempts allowed (retries = 0)".into(),
        },
    ))
}

fn check_conclusions(
    g: &Graph,
    out: &CleaningOutput,
    d: usize,
    delta0: usize,
    kappa: u128,
    st: &mut super::StageGuard,
) -> Result<(), PipelineError> {
    let n = g.n();
    let xp = mask_of(n, &out.x_prime);
    let fail = |msg: &str| Err(PipelineError::structural("conclusions", msg.to_string()));
    if !st.check("disjoint", out.y.iter().all(|&y| !xp[y])) {
        return fail("Y meets X'");
    }
    if !st.check("(ii) Y independent", g.is_independent(&out.y)) {
        return fail("Y is not independent");
    }
    let window = out.y.iter().all(|&y| {
        let k = g.degree_into(y, &xp);
        k >= 2 && k as u128 <= kappa
    });
    if !st.check("(iii) 2 <= |N(y) & X'| <= kappa", window) {
        return fail("degree window violated");
    }
    if !st.check(
        "(iv) d(x') <= delta0",
        members(&xp).iter().all(|&x| g.degree(x) <= delta0),
    ) {
        return fail("X' has a vertex of degree above delta0");
    }
    debug_assert!(d >= 4);
    Ok(())
}
