use serde::{Deserialize, Serialize};

use super::field::FiniteField;
use crate::error::DomainError;
use crate::graph::Graph;

/// The Desarguesian plane `PG(2, q)`. Points and lines are homogeneous
/// triples whose first nonzero coordinate is 1, listed in lexicographic
/// order; point `i` and line `i` share the same coordinates.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    pub field: FiniteField,
    pub q: usize,
    pub points: Vec<[usize; 3]>,
    /// Points on each line, ascending.
    pub lines_points: Vec<Vec<usize>>,
    /// Lines through each point, ascending.
    pub point_lines: Vec<Vec<usize>>,
    /// Triple key `x q² + y q + z` of a normalized triple to its index.
    index: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneJson {
    pub q: usize,
    pub points: Vec<[usize; 3]>,
    pub lines: Vec<[usize; 3]>,
    pub incidence: Vec<[usize; 2]>,
}

impl ProjectivePlane {
    pub fn new(q: usize) -> Result<Self, DomainError> {
        let field = FiniteField::new(q)?;
        let mut points = Vec::with_capacity(q * q + q + 1);
        for x in 0..q {
            for y in 0..q {
                for z in 0..q {
                    let first = [x, y, z].into_iter().find(|&c| c != 0);
                    if first == Some(1) {
                        points.push([x, y, z]);
                    }
                }
            }
        }
        let mut index = vec![usize::MAX; q * q * q];
        for (i, p) in points.iter().enumerate() {
            index[p[0] * q * q + p[1] * q + p[2]] = i;
        }
        let n = points.len();
        let mut lines_points = vec![Vec::with_capacity(q + 1); n];
        let mut point_lines = vec![Vec::with_capacity(q + 1); n];
        for (l, line) in points.iter().enumerate() {
            for (pi, pt) in points.iter().enumerate() {
                if Self::dot(&field, line, pt) == 0 {
                    lines_points[l].push(pi);
                    point_lines[pi].push(l);
                }
            }
        }
        let plane = ProjectivePlane {
            field,
            q,
            points,
            lines_points,
            point_lines,
            index,
        };
        plane.check_axioms()?;
        Ok(plane)
    }

    fn dot(f: &FiniteField, a: &[usize; 3], b: &[usize; 3]) -> usize {
        (0..3).fold(0, |acc, i| f.add(acc, f.mul(a[i], b[i])))
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        self.lines_points[line].binary_search(&point).is_ok()
    }

    /// Index of the normalized form of a nonzero triple.
    pub fn normalize(&self, t: [usize; 3]) -> Option<usize> {
        let f = &self.field;
        let lead = t.into_iter().find(|&c| c != 0)?;
        let s = f.inv(lead)?;
        let n = t.map(|c| f.mul(c, s));
        Some(self.index[n[0] * self.q * self.q + n[1] * self.q + n[2]])
    }

    /// The line through two distinct points (their cross product).
    pub fn line_through(&self, a: usize, b: usize) -> usize {
        let f = &self.field;
        let (u, v) = (self.points[a], self.points[b]);
        let cross = [
            f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1])),
            f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2])),
            f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0])),
        ];
        self.normalize(cross).expect("distinct points span a line")
    }

    /// Line sizes, point degrees, and unique lines through point pairs,
    /// all by direct counting.
    fn check_axioms(&self) -> Result<(), DomainError> {
        let (q, n) = (self.q, self.order());
        if n != q * q + q + 1 {
            return Err(DomainError(format!("PG(2,{q}) has {n} points")));
        }
        if self.lines_points.iter().any(|l| l.len() != q + 1)
            || self.point_lines.iter().any(|p| p.len() != q + 1)
        {
            return Err(DomainError(format!(
                "PG(2,{q}) incidence is not (q+1)-regular"
            )));
        }
        let mut common = vec![0u8; n * n];
        for line in &self.lines_points {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    common[a * n + b] = common[a * n + b].saturating_add(1);
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if common[a * n + b] != 1 {
                    return Err(DomainError(format!(
                        "points {a} and {b} of PG(2,{q}) share {} lines",
                        common[a * n + b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> PlaneJson {
        PlaneJson {
            q: self.q,
            points: self.points.clone(),
            lines: self.points.clone(),
            incidence: self
                .lines_points
                .iter()
                .enumerate()
                .flat_map(|(l, pts)| pts.iter().map(move |&p| [p, l]))
                .collect(),
        }
    }
}

/// Bipartite point-line incidence graph: point `i` is vertex `i`, line `j`
/// is vertex `order + j`.
pub fn incidence_graph(plane: &ProjectivePlane) -> Graph {
    let n = plane.order();
    let edges = plane
        .lines_points
        .iter()
        .enumerate()
        .flat_map(|(l, pts)| pts.iter().map(move |&p| (p, n + l)));
    Graph::from_edges(2 * n, edges).expect("incidences are distinct")
}
