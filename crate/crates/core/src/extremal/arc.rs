use serde::{Deserialize, Serialize};

use super::plane::ProjectivePlane;
use crate::error::DomainError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "points")]
pub enum ArcOutcome {
    /// Point indices, ascending.
    Found(Vec<usize>),
    NoneExists,
    BudgetExhausted,
}

/// True if no three of `points` are collinear.
pub fn is_arc(plane: &ProjectivePlane, points: &[usize]) -> bool {
    let mut on_line = vec![0usize; plane.order()];
    for &p in points {
        for &l in &plane.point_lines[p] {
            on_line[l] += 1;
            if on_line[l] > 2 {
                return false;
            }
        }
    }
    true
}

struct ArcSearch<'a> {
    plane: &'a ProjectivePlane,
    target: usize,
    chosen: Vec<usize>,
    /// Number of secant lines (through two chosen points) through each point.
    blocked: Vec<u32>,
    budget: u64,
    nodes: u64,
}

struct Exhausted;

/// Backtracking search for an arc of `target` points. Points are added in
/// ascending order and every point on a line through two chosen points is
/// excluded. With `fix_first`, the first point is the lexicographically
/// smallest point of the plane; the collineation group is transitive on
/// points, so this loses no arcs up to equivalence. `budget` counts search
/// nodes.
pub fn max_arc(
    plane: &ProjectivePlane,
    target: usize,
    budget: u64,
    fix_first: bool,
) -> Result<ArcOutcome, DomainError> {
    if target > plane.q + 2 {
        return Err(DomainError(format!(
            "arcs in PG(2,{}) have at most {} points, asked for {target}",
            plane.q,
            plane.q + 2
        )));
    }
    let mut search = ArcSearch {
        plane,
        target,
        chosen: Vec::with_capacity(target),
        blocked: vec![0; plane.order()],
        budget,
        nodes: 0,
    };
    let result = if target == 0 {
        Ok(true)
    } else if fix_first {
        search.push(0);
        search.extend(1)
    } else {
        search.extend(0)
    };
    Ok(match result {
        Err(Exhausted) => ArcOutcome::BudgetExhausted,
        Ok(true) => {
            debug_assert!(is_arc(plane, &search.chosen));
            ArcOutcome::Found(search.chosen)
        }
        Ok(false) => ArcOutcome::NoneExists,
    })
}

impl ArcSearch<'_> {
    fn push(&mut self, p: usize) {
        for i in 0..self.chosen.len() {
            let l = self.plane.line_through(self.chosen[i], p);
            for &x in &self.plane.lines_points[l] {
                self.blocked[x] += 1;
            }
        }
        self.chosen.push(p);
    }

    fn pop(&mut self) {
        let p = self.chosen.pop().unwrap();
        for i in 0..self.chosen.len() {
            let l = self.plane.line_through(self.chosen[i], p);
            for &x in &self.plane.lines_points[l] {
                self.blocked[x] -= 1;
            }
        }
    }

    fn extend(&mut self, from: usize) -> Result<bool, Exhausted> {
        if self.chosen.len() == self.target {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Exhausted);
        }
        let need = self.target - self.chosen.len();
        let candidates: Vec<usize> = (from..self.plane.order())
            .filter(|&p| self.blocked[p] == 0)
            .collect();
        if candidates.len() < need {
            return Ok(false);
        }
        for (i, &p) in candidates.iter().enumerate() {
            if candidates.len() - i < need {
                break;
            }
            if self.blocked[p] != 0 {
                continue;
            }
            self.push(p);
            if self.extend(p + 1)? {
                return Ok(true);
            }
            self.pop();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(q: usize) -> ProjectivePlane {
        ProjectivePlane::new(q).unwrap()
    }

    #[test]
    fn conic_plus_nucleus_direction_in_order_five() {
        let pl = plane(5);
        let f = &pl.field;
        let mut pts: Vec<usize> = (0..5)
            .map(|t| pl.normalize([t, f.mul(t, t), 1]).unwrap())
            .collect();
        pts.push(pl.normalize([0, 1, 0]).unwrap());
        assert!(is_arc(&pl, &pts));
    }

    #[test]
    fn search_results() {
        let pl = plane(5);
        match max_arc(&pl, 6, u64::MAX, true).unwrap() {
            ArcOutcome::Found(a) => assert!(a.len() == 6 && is_arc(&pl, &a)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            max_arc(&pl, 7, u64::MAX, true).unwrap(),
            ArcOutcome::NoneExists
        );
        let pl4 = plane(4);
        assert!(matches!(
            max_arc(&pl4, 6, u64::MAX, true).unwrap(),
            ArcOutcome::Found(_)
        ));
        assert!(max_arc(&pl4, 7, 10, true).is_err());
    }

    #[test]
    fn reduction_agrees_with_full_search() {
        for q in [2, 3] {
            let pl = plane(q);
            for target in 0..=q + 2 {
                let reduced = max_arc(&pl, target, u64::MAX, true).unwrap();
                let full = max_arc(&pl, target, u64::MAX, false).unwrap();
                assert_eq!(
                    matches!(reduced, ArcOutcome::Found(_)),
                    matches!(full, ArcOutcome::Found(_)),
                    "q={q} target={target}"
                );
            }
        }
    }

    #[test]
    fn budget() {
        assert_eq!(
            max_arc(&plane(7), 9, 5, true).unwrap(),
            ArcOutcome::BudgetExhausted
        );
    }
}
