use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::paths::{separated, PathSystem};
use crate::graph::Graph;

/// Evidence that an auxiliary vertex is robustly branchable.
///
/// `y` and the classes are root positions of the path system; `z` are host
/// vertices. Every `P_{y y'}` with `y'` in `classes[i]` leaves `y` through
/// `z[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchWitness {
    pub y: usize,
    pub z: Vec<usize>,
    /// Sorted, pairwise disjoint.
    pub classes: Vec<Vec<usize>>,
}

/// Outcome of re-checking a witness against the host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    /// `z` are distinct host neighbors of `y` and the classes are disjoint
    /// sets of `H`-neighbors of `y`.
    pub well_formed: bool,
    /// Condition (i): every class has at least `q` members.
    pub sizes: bool,
    /// Condition (ii): `z[i]` lies on `P_{y y'}` for every `y'` in class `i`.
    pub through_z: bool,
    /// Condition (iii): the paths of any selection are internally disjoint
    /// and anticomplete away from `y`.
    pub separated: bool,
    /// Whether (iii) was checked on every pair of paths or by spot checks.
    pub exhaustive: bool,
}

impl WitnessCheck {
    pub fn holds(&self) -> bool {
        self.well_formed && self.sizes && self.through_z && self.separated
    }
}

/// Limits for condition (iii).
#[derive(Clone, Copy, Debug)]
pub struct SeparationBudget {
    /// Exhaustive check when the number of path pairs is at most this.
    pub pair_cap: u64,
    /// Random selections tried above the cap.
    pub spot_checks: u32,
}

impl BranchWitness {
    /// Re-validates conditions (i) to (iii) from the host.
    ///
    /// Condition (iii) is a conjunction over pairs of classes, so it holds
    /// for every selection exactly when it holds for every pair `y_i`, `y_j`
    /// from distinct classes. All such pairs are checked when there are at
    /// most `pair_cap` of them; otherwise `spot_checks` random selections
    /// are checked in full.
    pub fn replay<R: Rng>(
        &self,
        g: &Graph,
        ps: &PathSystem,
        h: &Graph,
        q: usize,
        budget: SeparationBudget,
        rng: &mut R,
    ) -> WitnessCheck {
        let host_y = ps.roots[self.y];
        let mut seen = vec![false; h.n()];
        let mut well_formed = self.z.len() == self.classes.len();
        for (i, &z) in self.z.iter().enumerate() {
            well_formed &= g.has_edge(host_y, z) && !self.z[..i].contains(&z);
        }
        for class in &self.classes {
            for &w in class {
                well_formed &= w < h.n() && h.has_edge(self.y, w) && !seen[w];
                if w < h.n() {
                    seen[w] = true;
                }
            }
        }
        if !well_formed {
            return WitnessCheck {
                well_formed,
                sizes: false,
                through_z: false,
                separated: false,
                exhaustive: false,
            };
        }
        let sizes = self.classes.iter().all(|c| c.len() >= q);
        let tails: Vec<Vec<Vec<usize>>> = self
            .classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&w| ps.path(self.y, w)[1..].to_vec())
                    .collect()
            })
            .collect();
        let through_z = tails
            .iter()
            .zip(&self.z)
            .all(|(class, &z)| class.iter().all(|t| t[0] == z));
        let pairs: u64 = (0..tails.len())
            .flat_map(|i| (i + 1..tails.len()).map(move |j| (i, j)))
            .map(|(i, j)| tails[i].len() as u64 * tails[j].len() as u64)
            .sum();
        let exhaustive = pairs <= budget.pair_cap;
        let separated_ok = if exhaustive {
            (0..tails.len()).all(|i| {
                (i + 1..tails.len()).all(|j| {
                    tails[i]
                        .iter()
                        .all(|a| tails[j].iter().all(|b| separated(g, a, b)))
                })
            })
        } else {
            (0..budget.spot_checks).all(|_| {
                let pick: Vec<&Vec<usize>> = tails
                    .iter()
                    .map(|c| &c[rng.random_range(0..c.len())])
                    .collect();
                (0..pick.len()).all(|i| (i + 1..pick.len()).all(|j| separated(g, pick[i], pick[j])))
            })
        };
        WitnessCheck {
            well_formed,
            sizes,
            through_z,
            separated: separated_ok,
            exhaustive,
        }
    }
}

/// Witnesses for every vertex of `h` that is `q`-robustly `a`-branchable
/// by the first-step classes.
///
/// The `H`-neighbors `y'` of `y` are grouped by the vertex following `y` on
/// `P_{y y'}`. When at least `a` groups have `q` or more members, the `a`
/// largest (ties by smaller host vertex) form the candidate witness, which
/// is kept only if its replay passes.
pub fn branch_witnesses<R: Rng>(
    g: &Graph,
    ps: &PathSystem,
    h: &Graph,
    a: usize,
    q: usize,
    budget: SeparationBudget,
    rng: &mut R,
) -> BTreeMap<usize, BranchWitness> {
    let mut out = BTreeMap::new();
    for y in 0..h.n() {
        if h.degree(y) == 0 || g.degree(ps.roots[y]) < a {
            continue;
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &w in h.neighbors(y) {
            groups.entry(ps.path(y, w)[1]).or_default().push(w);
        }
        let mut big: Vec<(usize, Vec<usize>)> =
            groups.into_iter().filter(|(_, c)| c.len() >= q).collect();
        if big.len() < a {
            continue;
        }
        big.sort_by(|x, y| y.1.len().cmp(&x.1.len()).then(x.0.cmp(&y.0)));
        big.truncate(a);
        let witness = BranchWitness {
            y,
            z: big.iter().map(|(z, _)| *z).collect(),
            classes: big.into_iter().map(|(_, c)| c).collect(),
        };
        if witness.replay(g, ps, h, q, budget, rng).holds() {
            out.insert(y, witness);
        }
    }
    out
}
