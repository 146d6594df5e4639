use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, GraphError};
use crate::format::GraphJson;
use crate::graph::Graph;

/// Terminal pairs to be joined by pairwise vertex-disjoint paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkageInstance {
    pub host: Graph,
    pub pairs: Vec<(usize, usize)>,
}

impl LinkageInstance {
    pub fn new(host: Graph, pairs: Vec<(usize, usize)>) -> Result<Self, DomainError> {
        if pairs.is_empty() {
            return Err(DomainError(
                "a linkage instance needs at least one pair".into(),
            ));
        }
        let mut seen = vec![false; host.n()];
        for &(x, y) in &pairs {
            for v in [x, y] {
                if v >= host.n() {
                    return Err(DomainError(format!("terminal {v} out of range")));
                }
                if seen[v] {
                    return Err(DomainError(format!("terminal {v} used twice")));
                }
                seen[v] = true;
            }
        }
        Ok(LinkageInstance { host, pairs })
    }

    pub fn solve(&self, budget: u64) -> LinkageOutcome {
        solve_linkage(&self.host, &self.pairs, budget).expect("instance validated on construction")
    }
}

/// JSON form: `{"graph": {...}, "pairs": [[x, y], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkageInstanceJson {
    pub graph: GraphJson,
    pub pairs: Vec<[usize; 2]>,
}

impl LinkageInstanceJson {
    pub fn into_instance(self) -> Result<LinkageInstance, LinkageJsonError> {
        let host = Graph::try_from(self.graph)?;
        Ok(LinkageInstance::new(
            host,
            self.pairs.into_iter().map(|[x, y]| (x, y)).collect(),
        )?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LinkageJsonError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "paths")]
pub enum LinkageOutcome {
    /// Path `i` joins `pairs[i].0` to `pairs[i].1`.
    Linked(Vec<Vec<usize>>),
    /// The search space was exhausted: no linkage exists.
    Infeasible,
    /// Node budget ran out before the search finished.
    BudgetExhausted,
}

struct Exhausted;

struct Search<'a> {
    g: &'a Graph,
    pairs: Vec<(usize, usize)>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    budget: u64,
    expansions: u64,
}

/// Exhaustive backtracking for vertex-disjoint paths joining each pair.
///
/// Pairs are routed in order of increasing host distance; each path is grown
/// one vertex at a time, trying neighbors closest to the target first.
/// Every simple path is eventually tried for every pair, so `Infeasible` is a
/// proof of non-linkage. `budget` caps the number of path extensions.
pub fn solve_linkage(
    g: &Graph,
    pairs: &[(usize, usize)],
    budget: u64,
) -> Result<LinkageOutcome, DomainError> {
    LinkageInstance::new(Graph::empty(g.n()), pairs.to_vec())?;
    let mut order: Vec<(usize, usize)> = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        match g.distance(x, y) {
            None => return Ok(LinkageOutcome::Infeasible),
            Some(d) => order.push((d, i)),
        }
    }
    order.sort_unstable();
    let mut used = vec![false; g.n()];
    for &(x, y) in pairs {
        used[x] = true;
        used[y] = true;
    }
    let mut search = Search {
        g,
        pairs: order.iter().map(|&(_, i)| pairs[i]).collect(),
        used,
        paths: Vec::new(),
        budget,
        expansions: 0,
    };
    match search.route(0) {
        Err(Exhausted) => Ok(LinkageOutcome::BudgetExhausted),
        Ok(false) => Ok(LinkageOutcome::Infeasible),
        Ok(true) => {
            let mut out = vec![Vec::new(); pairs.len()];
            for (slot, path) in order.iter().zip(search.paths) {
                out[slot.1] = path;
            }
            Ok(LinkageOutcome::Linked(out))
        }
    }
}

impl Search<'_> {
    fn route(&mut self, idx: usize) -> Result<bool, Exhausted> {
        if idx == self.pairs.len() {
            return Ok(true);
        }
        for j in idx..self.pairs.len() {
            let (x, y) = self.pairs[j];
            if self.free_distances(y)[x].is_none() {
                return Ok(false);
            }
        }
        let (x, _) = self.pairs[idx];
        let mut path = vec![x];
        self.extend(idx, &mut path)
    }

    /// BFS distances to `target` through unused vertices; terminals other
    /// than `target` are never entered but may be the start of the search.
    fn free_distances(&self, target: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.g.n()];
        dist[target] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.g.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    if !self.used[w] {
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    fn extend(&mut self, idx: usize, path: &mut Vec<usize>) -> Result<bool, Exhausted> {
        let (_, y) = self.pairs[idx];
        let cur = *path.last().unwrap();
        if self.g.has_edge(cur, y) {
            self.tick()?;
            path.push(y);
            self.paths.push(path.clone());
            if self.route(idx + 1)? {
                return Ok(true);
            }
            self.paths.pop();
            path.pop();
        }
        let dist = self.free_distances(y);
        let mut next: Vec<(usize, usize)> = self
            .g
            .neighbors(cur)
            .iter()
            .filter(|&&w| !self.used[w])
            .filter_map(|&w| dist[w].map(|d| (d, w)))
            .collect();
        next.sort_unstable();
        for (_, w) in next {
            self.tick()?;
            self.used[w] = true;
            path.push(w);
            let found = self.extend(idx, path)?;
            path.pop();
            self.used[w] = false;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn tick(&mut self) -> Result<(), Exhausted> {
        self.expansions += 1;
        if self.expansions > self.budget {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }
}

/// Checks that `paths` is a valid linkage for `pairs` in `g`.
pub fn is_valid_linkage(g: &Graph, pairs: &[(usize, usize)], paths: &[Vec<usize>]) -> bool {
    if paths.len() != pairs.len() {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for (&(x, y), p) in pairs.iter().zip(paths) {
        if p.first() != Some(&x) || p.last() != Some(&y) {
            return false;
        }
        if p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
            return false;
        }
        for &v in p {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_edges_in_k6() {
        let g = Graph::complete(6);
        let pairs = [(0, 1), (2, 3)];
        match solve_linkage(&g, &pairs, 1000).unwrap() {
            LinkageOutcome::Linked(p) => {
                assert!(is_valid_linkage(&g, &pairs, &p));
                assert_eq!(p, vec![vec![0, 1], vec![2, 3]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn crossing_pairs_on_a_cycle() {
        let g = Graph::cycle(4);
        assert_eq!(
            solve_linkage(&g, &[(0, 2), (1, 3)], 1000).unwrap(),
            LinkageOutcome::Infeasible
        );
    }

    #[test]
    fn disconnected_pair_is_infeasible() {
        let g = Graph::disjoint_union(&[Graph::path(2), Graph::path(2)]);
        assert_eq!(
            solve_linkage(&g, &[(0, 2)], 10).unwrap(),
            LinkageOutcome::Infeasible
        );
    }

    #[test]
    fn budget_is_reported() {
        let g = Graph::complete(12);
        // Three crossing pairs on a big wheel-free host would be trivial, so
        // starve the search instead.
        assert_eq!(
            solve_linkage(&g, &[(0, 1), (2, 3)], 1).unwrap(),
            LinkageOutcome::BudgetExhausted
        );
    }

    #[test]
    fn invalid_instances() {
        let g = Graph::complete(4);
        assert!(solve_linkage(&g, &[], 10).is_err());
        assert!(solve_linkage(&g, &[(0, 1), (1, 2)], 10).is_err());
        assert!(solve_linkage(&g, &[(0, 9)], 10).is_err());
    }

    #[test]
    fn json_instance() {
        let j: LinkageInstanceJson = serde_json::from_str(
            r#"{"graph": {"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}, "pairs": [[0,2],[1,3]]}"#,
        )
        .unwrap();
        let inst = j.into_instance().unwrap();
        assert_eq!(inst.solve(100), LinkageOutcome::Infeasible);
        let s = serde_json::to_string(&LinkageOutcome::Linked(vec![vec![0, 1]])).unwrap();
        assert_eq!(s, r#"{"status":"linked","paths":[[0,1]]}"#);
    }
}
