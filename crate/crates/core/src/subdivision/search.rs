use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::certificate::SubdivisionCertificate;
use crate::error::DomainError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// The union of the paths must induce exactly the subdivision. With
    /// `proper_only`, branch vertices must also be pairwise nonadjacent.
    Induced { proper_only: bool },
    /// Only internal vertex-disjointness is required.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindOutcome {
    Found(SubdivisionCertificate),
    /// The search space was exhausted within the budget.
    NoneExists,
    BudgetExhausted,
}

impl FindOutcome {
    pub fn certificate(&self) -> Option<&SubdivisionCertificate> {
        match self {
            FindOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// Exhaustive search for an induced subdivision of `pattern` in `host`.
/// `budget` counts branch placements and path extensions.
pub fn find_induced_subdivision(
    host: &Graph,
    pattern: &Graph,
    budget: u64,
    proper_only: bool,
) -> Result<FindOutcome, DomainError> {
    find_subdivision(host, pattern, budget, SearchMode::Induced { proper_only })
}

/// Exhaustive backtracking: branch vertices are placed first (host vertices
/// by descending degree, then index; increasing order only when the pattern
/// is complete), then pattern edges are routed one at a time, always picking
/// the unrouted edge whose endpoints are currently closest. Paths grow
/// shortest-first toward their target.
pub fn find_subdivision(
    host: &Graph,
    pattern: &Graph,
    budget: u64,
    mode: SearchMode,
) -> Result<FindOutcome, DomainError> {
    if pattern.n() > host.n() {
        return Err(DomainError(format!(
            "pattern has {} vertices but the host only {}",
            pattern.n(),
            host.n()
        )));
    }
    let mut candidates: Vec<usize> = (0..host.n()).collect();
    candidates.sort_by_key(|&v| (std::cmp::Reverse(host.degree(v)), v));
    let k = pattern.n();
    let mut finder = Finder {
        host,
        pattern,
        mode,
        candidates,
        complete_pattern: pattern.m() == k * k.saturating_sub(1) / 2,
        branch: Vec::with_capacity(k),
        in_w: vec![false; host.n()],
        paths: BTreeMap::new(),
        budget,
        expansions: 0,
    };
    Ok(match finder.assign(0) {
        Err(Exhausted) => FindOutcome::BudgetExhausted,
        Ok(false) => FindOutcome::NoneExists,
        Ok(true) => FindOutcome::Found(SubdivisionCertificate {
            pattern: pattern.clone(),
            branch: finder.branch,
            paths: finder.paths,
        }),
    })
}

struct Exhausted;

struct Finder<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    mode: SearchMode,
    candidates: Vec<usize>,
    complete_pattern: bool,
    branch: Vec<usize>,
    /// Vertices already used: branch images and path vertices.
    in_w: Vec<bool>,
    paths: BTreeMap<(usize, usize), Vec<usize>>,
    budget: u64,
    expansions: u64,
}

impl Finder<'_> {
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.expansions += 1;
        if self.expansions > self.budget {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    fn induced(&self) -> bool {
        matches!(self.mode, SearchMode::Induced { .. })
    }

    fn assign(&mut self, i: usize) -> Result<bool, Exhausted> {
        if i == self.pattern.n() {
            return self.start_routing();
        }
        let start = match (self.complete_pattern, self.branch.last()) {
            (true, Some(&prev)) => self.candidates.iter().position(|&c| c == prev).unwrap() + 1,
            _ => 0,
        };
        let need = self.pattern.degree(i);
        for r in start..self.candidates.len() {
            let b = self.candidates[r];
            if self.host.degree(b) < need {
                break;
            }
            if self.in_w[b] || !self.compatible(i, b) {
                continue;
            }
            self.tick()?;
            self.branch.push(b);
            self.in_w[b] = true;
            if self.assign(i + 1)? {
                return Ok(true);
            }
            self.in_w[b] = false;
            self.branch.pop();
        }
        Ok(false)
    }

    /// Whether host vertex `b` may be the image of pattern vertex `i` given
    /// the images already placed.
    fn compatible(&self, i: usize, b: usize) -> bool {
        let SearchMode::Induced { proper_only } = self.mode else {
            return true;
        };
        self.branch.iter().enumerate().all(|(j, &bj)| {
            !self.host.has_edge(b, bj) || (!proper_only && self.pattern.has_edge(i, j))
        })
    }

    fn start_routing(&mut self) -> Result<bool, Exhausted> {
        let mut unrouted = Vec::new();
        let mut forced = Vec::new();
        for (u, v) in self.pattern.edges() {
            let (bu, bv) = (self.branch[u], self.branch[v]);
            if self.induced() && self.host.has_edge(bu, bv) {
                forced.push(((u, v), vec![bu, bv]));
            } else {
                unrouted.push((u, v));
            }
        }
        for (e, p) in &forced {
            self.paths.insert(*e, p.clone());
        }
        let found = self.route(&mut unrouted)?;
        if !found {
            for (e, _) in &forced {
                self.paths.remove(e);
            }
        }
        Ok(found)
    }

    /// Whether `x` may join a path whose current end is `end` and whose
    /// target is `target`.
    fn usable(&self, x: usize, end: usize, target: usize) -> bool {
        if self.in_w[x] {
            return false;
        }
        !self.induced()
            || self
                .host
                .neighbors(x)
                .iter()
                .all(|&w| !self.in_w[w] || w == end || w == target)
    }

    /// BFS distances from `target` through vertices usable for a path that
    /// currently ends at `end`.
    fn distances_to(&self, target: usize, end: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.host.n()];
        dist[target] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.host.neighbors(u) {
                if dist[w].is_none() && self.usable(w, end, target) {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of the shortest admissible continuation from `end`, if any.
    fn gap(&self, end: usize, target: usize) -> Option<usize> {
        if !self.induced() && self.host.has_edge(end, target) {
            return Some(1);
        }
        let dist = self.distances_to(target, end);
        self.host
            .neighbors(end)
            .iter()
            .filter(|&&x| x != target)
            .filter_map(|&x| dist[x])
            .min()
            .map(|d| d + 1)
    }

    fn route(&mut self, unrouted: &mut Vec<(usize, usize)>) -> Result<bool, Exhausted> {
        if unrouted.is_empty() {
            return Ok(true);
        }
        let mut best: Option<(usize, usize)> = None;
        for (idx, &(u, v)) in unrouted.iter().enumerate() {
            match self.gap(self.branch[u], self.branch[v]) {
                None => return Ok(false),
                Some(d) if best.is_none_or(|(bd, _)| d < bd) => best = Some((d, idx)),
                Some(_) => {}
            }
        }
        let idx = best.unwrap().1;
        let edge = unrouted.remove(idx);
        let mut path = vec![self.branch[edge.0]];
        let found = self.extend(edge, &mut path, unrouted)?;
        if !found {
            unrouted.insert(idx, edge);
        }
        Ok(found)
    }

    fn extend(
        &mut self,
        edge: (usize, usize),
        path: &mut Vec<usize>,
        unrouted: &mut Vec<(usize, usize)>,
    ) -> Result<bool, Exhausted> {
        let target = self.branch[edge.1];
        let end = *path.last().unwrap();
        if !self.induced() && self.host.has_edge(end, target) {
            self.tick()?;
            if self.close(edge, path, target, unrouted)? {
                return Ok(true);
            }
        }
        let dist = self.distances_to(target, end);
        let mut next: Vec<(usize, usize)> = self
            .host
            .neighbors(end)
            .iter()
            .filter(|&&x| x != target)
            .filter_map(|&x| dist[x].map(|d| (d, x)))
            .collect();
        next.sort_unstable();
        for (_, x) in next {
            self.tick()?;
            self.in_w[x] = true;
            path.push(x);
            let found = if self.induced() && self.host.has_edge(x, target) {
                self.close(edge, path, target, unrouted)?
            } else {
                self.extend(edge, path, unrouted)?
            };
            if found {
                return Ok(true);
            }
            path.pop();
            self.in_w[x] = false;
        }
        Ok(false)
    }

    fn close(
        &mut self,
        edge: (usize, usize),
        path: &[usize],
        target: usize,
        unrouted: &mut Vec<(usize, usize)>,
    ) -> Result<bool, Exhausted> {
        let mut full = path.to_vec();
        full.push(target);
        self.paths.insert(edge, full);
        if self.route(unrouted)? {
            return Ok(true);
        }
        self.paths.remove(&edge);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{one_subdivision, verify};

    fn found(outcome: FindOutcome) -> SubdivisionCertificate {
        match outcome {
            FindOutcome::Found(c) => c,
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn cycle_contains_triangle_subdivision() {
        let c7 = Graph::cycle(7);
        let cert = found(find_induced_subdivision(&c7, &Graph::complete(3), 10_000, true).unwrap());
        let r = verify(&c7, &cert).unwrap();
        assert!(r.is_induced && r.is_proper);
        assert_eq!(cert.vertex_set().len(), 7);
    }

    #[test]
    fn petersen_contains_only_improper_induced_k4_subdivisions() {
        let g = Graph::petersen();
        let k4 = Graph::complete(4);
        let cert = found(find_induced_subdivision(&g, &k4, 1_000_000, false).unwrap());
        let r = verify(&g, &cert).unwrap();
        assert!(r.is_induced && !r.is_proper, "{r:?}");
        // A proper one would need all ten vertices and exactly twelve edges.
        assert_eq!(
            find_induced_subdivision(&g, &k4, 1_000_000, true).unwrap(),
            FindOutcome::NoneExists
        );
    }

    #[test]
    fn star_has_no_cycle() {
        let star = Graph::star(5);
        assert_eq!(
            find_induced_subdivision(&star, &Graph::complete(3), 10_000, false).unwrap(),
            FindOutcome::NoneExists
        );
    }

    #[test]
    fn triangle_is_improper() {
        let k3 = Graph::complete(3);
        assert!(find_induced_subdivision(&k3, &k3, 100, false)
            .unwrap()
            .certificate()
            .is_some());
        assert_eq!(
            find_induced_subdivision(&k3, &k3, 100, true).unwrap(),
            FindOutcome::NoneExists
        );
    }

    #[test]
    fn clique_host_only_has_improper_embeddings() {
        // K5 contains K4 as a subgraph but every induced subgraph on 4+
        // vertices is a clique, so only the improper embedding works.
        let k5 = Graph::complete(5);
        let k4 = Graph::complete(4);
        assert!(find_subdivision(&k5, &k4, 100, SearchMode::Plain)
            .unwrap()
            .certificate()
            .is_some());
        assert_eq!(
            find_induced_subdivision(&k5, &k4, 10_000, true).unwrap(),
            FindOutcome::NoneExists
        );
    }

    #[test]
    fn recovers_one_subdivisions() {
        let pattern = Graph::complete(4);
        let (host, _) = one_subdivision(&pattern);
        let cert = found(find_induced_subdivision(&host, &pattern, 100_000, true).unwrap());
        assert!(verify(&host, &cert).unwrap().is_proper);
    }

    #[test]
    fn budget_and_domain() {
        let g = Graph::petersen();
        assert_eq!(
            find_induced_subdivision(&g, &Graph::complete(4), 3, true).unwrap(),
            FindOutcome::BudgetExhausted
        );
        assert!(
            find_induced_subdivision(&Graph::complete(3), &Graph::complete(4), 10, false).is_err()
        );
    }
}
