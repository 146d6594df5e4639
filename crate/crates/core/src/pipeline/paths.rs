use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;

use crate::error::PipelineError;
use crate::graph::Graph;
use crate::invariants::{bfs_forest, BfsForest};
use crate::subdivision::is_induced_path;

/// Roots, their nearest-root forest, the auxiliary graph `H*` and the
/// conflict graph `F`.
///
/// Auxiliary vertices are root positions `0..roots.len()`; `roots[i]` is
/// the host vertex. Pair keys `(i, j)` have `i < j`, and `paths[(i, j)]`
/// runs from `roots[i]` to `roots[j]`.
#[derive(Clone, Debug)]
pub struct PathSystem {
    /// Sorted host vertices.
    pub roots: Vec<usize>,
    pub forest: BfsForest,
    /// Root position of the tree holding each host vertex.
    pub tree_of: Vec<Option<usize>>,
    pub max_len: usize,
    /// `H*` on root positions.
    pub aux: Graph,
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
    /// `N_F(e)`: root positions whose tree meets `P_e` or a neighbor of it.
    pub conflicts: BTreeMap<(usize, usize), Vec<usize>>,
    /// Bound `(L+1)(Delta+1)` on `|N_F(e)|`.
    pub conflict_bound: usize,
    /// Tree pairs joined by one edge whose path was not induced and was
    /// therefore left out of `H*`.
    pub skipped_non_induced: Vec<(usize, usize)>,
}

impl PathSystem {
    /// `P_{ij}` oriented from `roots[i]` to `roots[j]`.
    pub fn path(&self, i: usize, j: usize) -> Vec<usize> {
        let p = &self.paths[&(i.min(j), i.max(j))];
        if i < j {
            p.clone()
        } else {
            p.iter().rev().copied().collect()
        }
    }

    pub fn conflict(&self, i: usize, j: usize) -> &[usize] {
        &self.conflicts[&(i.min(j), i.max(j))]
    }

    /// Position of a host vertex among the roots.
    pub fn position(&self, host: usize) -> Option<usize> {
        self.roots.binary_search(&host).ok()
    }
}

/// Greedy maximal set of vertices at pairwise distance greater than `2 ell`,
/// seeded by a maximal such subset of `preferred` and then extended over all
/// vertices; both passes scan in ascending index order. Returns sorted
/// vertices.
pub fn separated_roots(g: &Graph, ell: usize, preferred: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut blocked = vec![false; n];
    let mut roots = Vec::new();
    let mut seeds: Vec<usize> = preferred.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    for v in seeds.into_iter().chain(0..n) {
        if blocked[v] {
            continue;
        }
        roots.push(v);
        let mut seen = BTreeMap::from([(v, 0usize)]);
        let mut queue = VecDeque::from([v]);
        blocked[v] = true;
        while let Some(x) = queue.pop_front() {
            let dx = seen[&x];
            if dx == 2 * ell {
                continue;
            }
            for &w in g.neighbors(x) {
                if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(dx + 1);
                    blocked[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    roots.sort_unstable();
    roots
}

/// Builds the path system on `roots` with paths of length at most `max_len`.
///
/// Every edge between two trees of the nearest-root forest yields the
/// unique root-to-root path through it; a second edge between the same pair
/// of trees is a structural error. Pairs whose path is longer than
/// `max_len` do not enter `H*`. `F` joins `e` to `w` when `P_e` meets `T_w`
/// or has a neighbor in it.
pub fn build_path_system(
    g: &Graph,
    roots: &[usize],
    max_len: usize,
) -> Result<PathSystem, PipelineError> {
    const STAGE: &str = "path-system";
    let mut roots = roots.to_vec();
    roots.sort_unstable();
    roots.dedup();
    if roots.iter().any(|&r| r >= g.n()) {
        return Err(PipelineError::precondition(STAGE, "root out of range"));
    }
    let forest = bfs_forest(g, &roots).map_err(|e| PipelineError::precondition(STAGE, e.0))?;
    let tree_of: Vec<Option<usize>> = forest
        .root
        .iter()
        .map(|r| r.map(|r| roots.binary_search(&r).expect("forest roots are roots")))
        .collect();
    let mut crossing: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (Some(tu), Some(tv)) = (tree_of[u], tree_of[v]) else {
            continue;
        };
        if tu == tv {
            continue;
        }
        // Orient the edge from the tree of the smaller root position.
        let (key, edge) = if tu < tv {
            ((tu, tv), (u, v))
        } else {
            ((tv, tu), (v, u))
        };
        if let Some(&prev) = crossing.get(&key) {
            return Err(PipelineError::structural(
                STAGE,
                format!(
                    "trees rooted at {} and {} are joined by two edges {}-{} and {}-{}",
                    roots[key.0], roots[key.1], prev.0, prev.1, edge.0, edge.1
                ),
            ));
        }
        crossing.insert(key, edge);
    }

    let mut paths = BTreeMap::new();
    let mut skipped = Vec::new();
    for (&(i, j), &(x, y)) in &crossing {
        let mut path = forest.path_to_root(x);
        path.reverse();
        path.extend(forest.path_to_root(y));
        if path.len() - 1 > max_len {
            continue;
        }
        if !is_induced_path(g, &path) {
            skipped.push((roots[i], roots[j]));
            continue;
        }
        paths.insert((i, j), path);
    }
    let aux = Graph::from_edges(roots.len(), paths.keys().copied()).expect("pairs are distinct");
    let mut conflicts = BTreeMap::new();
    for (&key, path) in &paths {
        let mut hit = BTreeSet::new();
        for &x in path {
            hit.extend(tree_of[x]);
            hit.extend(g.neighbors(x).iter().filter_map(|&w| tree_of[w]));
        }
        conflicts.insert(key, hit.into_iter().collect::<Vec<_>>());
    }
    let conflict_bound = (max_len + 1) * (g.max_degree().unwrap_or(0) + 1);
    if let Some((&(i, j), c)) = conflicts.iter().find(|(_, c)| c.len() > conflict_bound) {
        return Err(PipelineError::structural(
            STAGE,
            format!(
                "|N_F| = {} exceeds {conflict_bound} for {}-{}",
                c.len(),
                roots[i],
                roots[j]
            ),
        ));
    }
    Ok(PathSystem {
        roots,
        forest,
        tree_of,
        max_len,
        aux,
        paths,
        conflicts,
        conflict_bound,
        skipped_non_induced: skipped,
    })
}

/// A random root set `S` and the graph `H` on root positions keeping the
/// edges `uv` of `H*` with `N_F(uv) & S = {u, v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxSample {
    /// Sorted root positions.
    pub chosen: Vec<usize>,
    /// Spanning graph on all root positions; unchosen roots are isolated.
    pub h: Graph,
}

impl AuxSample {
    pub fn from_chosen(ps: &PathSystem, chosen: &[bool]) -> AuxSample {
        let edges = ps
            .conflicts
            .iter()
            .filter(|(&(u, v), c)| {
                chosen[u] && chosen[v] && c.iter().filter(|&&w| chosen[w]).count() == 2
            })
            .map(|(&e, _)| e);
        AuxSample {
            chosen: (0..chosen.len()).filter(|&i| chosen[i]).collect(),
            h: Graph::from_edges(ps.roots.len(), edges).expect("pairs are distinct"),
        }
    }

    /// Checks on up to `limit` pairs of vertex-disjoint `H`-edges that their
    /// paths are disjoint and anticomplete in `g`. Returns the first
    /// offending pair.
    pub fn disjointness_violation<R: Rng>(
        &self,
        g: &Graph,
        ps: &PathSystem,
        limit: usize,
        rng: &mut R,
    ) -> Option<((usize, usize), (usize, usize))> {
        let edges: Vec<(usize, usize)> = self.h.edges().collect();
        let total = edges.len() * edges.len().saturating_sub(1) / 2;
        let check = |e: (usize, usize), f: (usize, usize)| {
            if e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1 {
                return true;
            }
            separated(g, &ps.paths[&e], &ps.paths[&f])
        };
        if total <= limit {
            for a in 0..edges.len() {
                for b in a + 1..edges.len() {
                    if !check(edges[a], edges[b]) {
                        return Some((edges[a], edges[b]));
                    }
                }
            }
        } else {
            for _ in 0..limit {
                let (a, b) = (
                    rng.random_range(0..edges.len()),
                    rng.random_range(0..edges.len()),
                );
                if a != b && !check(edges[a], edges[b]) {
                    return Some((edges[a], edges[b]));
                }
            }
        }
        None
    }
}

/// Includes each root independently with probability `p`.
pub fn sample_aux_graph<R: Rng>(ps: &PathSystem, p: f64, rng: &mut R) -> AuxSample {
    let chosen: Vec<bool> = (0..ps.roots.len()).map(|_| rng.random_bool(p)).collect();
    AuxSample::from_chosen(ps, &chosen)
}

/// True if the vertex sets are disjoint and no edge joins them.
pub(crate) fn separated(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    a.iter()
        .all(|&x| !b.contains(&x) && b.iter().all(|&y| !g.has_edge(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stage_rng;

    #[test]
    fn roots_on_a_path() {
        let p = Graph::path(10);
        assert_eq!(separated_roots(&p, 1, &[]), vec![0, 3, 6, 9]);
        assert_eq!(separated_roots(&p, 0, &[]), (0..10).collect::<Vec<_>>());
        assert!(separated_roots(&p, 3, &[5]).contains(&5));
    }

    /// Two 3-leaf stars with centers 0 and 4, joined by the leaf edge 1-5.
    fn two_stars() -> Graph {
        Graph::from_edges(8, [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7), (1, 5)]).unwrap()
    }

    #[test]
    fn single_root_has_no_aux_edges() {
        let ps = build_path_system(&Graph::cycle(5), &[0], 9).unwrap();
        assert_eq!(ps.aux.m(), 0);
        assert!(ps.conflicts.is_empty());
    }

    #[test]
    fn two_stars_give_one_edge() {
        let g = two_stars();
        let ps = build_path_system(&g, &[0, 4], 3).unwrap();
        assert_eq!(ps.aux.m(), 1);
        assert_eq!(ps.path(0, 1), vec![0, 1, 5, 4]);
        assert_eq!(ps.path(1, 0), vec![4, 5, 1, 0]);
        assert_eq!(ps.conflict(0, 1), &[0, 1]);
        let short = build_path_system(&g, &[0, 4], 2).unwrap();
        assert_eq!(short.aux.m(), 0);
        let both = AuxSample::from_chosen(&ps, &[true, true]);
        assert_eq!(both.h.m(), 1);
        let none = AuxSample::from_chosen(&ps, &[false, false]);
        assert_eq!(none.h.m(), 0);
    }

    #[test]
    fn third_root_conflicts() {
        // Root 8 owns 9, which is adjacent to 5 on the path 0-1-5-4.
        let mut edges: Vec<(usize, usize)> = two_stars().edges().collect();
        edges.extend([(8, 9), (9, 5)]);
        let g = Graph::from_edges(10, edges).unwrap();
        let ps = build_path_system(&g, &[0, 4, 8], 3).unwrap();
        let i = |h: usize| ps.position(h).unwrap();
        assert!(ps.conflict(i(0), i(4)).contains(&i(8)));
        let all = AuxSample::from_chosen(&ps, &[true, true, true]);
        assert!(!all.h.has_edge(i(0), i(4)));
        let pair = AuxSample::from_chosen(&ps, &[true, true, false]);
        assert!(pair.h.has_edge(i(0), i(4)));
    }

    #[test]
    fn two_edges_between_trees_is_structural() {
        let err = build_path_system(&Graph::cycle(6), &[0, 3], 9).unwrap_err();
        match err {
            PipelineError::Structural { message, .. } => {
                assert!(message.contains("rooted at 0 and 3"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn paths_are_induced_and_short() {
        let mut rng = stage_rng(3, "test-paths", 0);
        let planted = crate::planted::tree_blowup(&Graph::petersen(), 3, 1);
        let g = planted.graph;
        let roots = separated_roots(&g, 1, &planted.hubs);
        assert_eq!(roots, planted.hubs);
        let ps = build_path_system(&g, &roots, 5).unwrap();
        assert_eq!(ps.paths.len(), 15);
        for p in ps.paths.values() {
            assert!(p.len() <= 6 && is_induced_path(&g, p));
        }
        let sample = sample_aux_graph(&ps, 0.5, &mut rng);
        assert_eq!(
            sample.disjointness_violation(&g, &ps, 10_000, &mut rng),
            None
        );
    }
}
