use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::CertificateError;
use crate::format::GraphJson;
use crate::graph::Graph;

/// A claimed embedding of `pattern` as a subdivision: pattern vertex `i`
/// maps to host vertex `branch[i]`, and pattern edge `(u, v)` with `u < v`
/// maps to a host path from `branch[u]` to `branch[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionCertificate {
    pub pattern: Graph,
    pub branch: Vec<usize>,
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

/// JSON wire form. Path keys are `"u-v"`; a key written `"v-u"` is accepted
/// with its path read from `branch[v]` to `branch[u]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub pattern: GraphJson,
    pub branch: Vec<usize>,
    pub paths: BTreeMap<String, Vec<usize>>,
}

impl SubdivisionCertificate {
    /// All vertices used by the certificate, sorted.
    pub fn vertex_set(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .branch
            .iter()
            .chain(self.paths.values().flatten())
            .copied()
            .collect();
        set.into_iter().collect()
    }

    /// Edges of the subdivision itself (consecutive path pairs, `u < v`).
    pub fn subdivision_edges(&self) -> BTreeSet<(usize, usize)> {
        self.paths
            .values()
            .flat_map(|p| p.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))))
            .collect()
    }

    /// Same certificate with every host vertex `v` renamed `map[v]`.
    pub fn relabel(&self, map: &[usize]) -> SubdivisionCertificate {
        SubdivisionCertificate {
            pattern: self.pattern.clone(),
            branch: self.branch.iter().map(|&v| map[v]).collect(),
            paths: self
                .paths
                .iter()
                .map(|(&k, p)| (k, p.iter().map(|&v| map[v]).collect()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            pattern: GraphJson::from(&self.pattern),
            branch: self.branch.clone(),
            paths: self
                .paths
                .iter()
                .map(|(&(u, v), p)| (format!("{u}-{v}"), p.clone()))
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes")
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self, CertificateError> {
        let j: CertificateJson = serde_json::from_slice(bytes)
            .map_err(|e| CertificateError::Malformed(e.to_string()))?;
        Self::try_from(j)
    }
}

impl TryFrom<CertificateJson> for SubdivisionCertificate {
    type Error = CertificateError;

    fn try_from(j: CertificateJson) -> Result<Self, Self::Error> {
        let pattern = Graph::try_from(j.pattern)
            .map_err(|e| CertificateError::Malformed(format!("pattern: {e}")))?;
        if j.branch.len() != pattern.n() {
            return Err(CertificateError::BranchLength {
                expected: pattern.n(),
                got: j.branch.len(),
            });
        }
        let mut paths = BTreeMap::new();
        for (key, mut path) in j.paths {
            let parsed = key.split_once('-').and_then(|(a, b)| {
                Some((
                    a.trim().parse::<usize>().ok()?,
                    b.trim().parse::<usize>().ok()?,
                ))
            });
            let Some((u, v)) = parsed else {
                return Err(CertificateError::UnknownPathKey(key));
            };
            if u >= pattern.n() || v >= pattern.n() || !pattern.has_edge(u, v) {
                return Err(CertificateError::UnknownPathKey(key));
            }
            if u > v {
                path.reverse();
            }
            if paths.insert((u.min(v), u.max(v)), path).is_some() {
                return Err(CertificateError::Malformed(format!(
                    "edge {key} has two paths"
                )));
            }
        }
        Ok(SubdivisionCertificate {
            pattern,
            branch: j.branch,
            paths,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A path does not start and end at its branch vertices.
    PathEndpoints,
    /// Consecutive path vertices are not adjacent in the host.
    NonAdjacentStep,
    /// A vertex occurs twice on one path.
    RepeatedVertex,
    /// Two paths share an internal vertex.
    SharedInternal,
    /// An internal path vertex is a branch vertex.
    InternalHitsBranch,
    /// Two pattern vertices map to the same host vertex.
    BranchNotInjective,
    /// A host edge inside the certificate's vertex set is not a path step.
    ExtraEdge,
    /// Two branch vertices are adjacent in the host.
    AdjacentBranches,
}

/// One failed condition with the host vertices and edges that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub is_subdivision: bool,
    pub is_induced: bool,
    pub is_proper: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

fn violation(kind: ViolationKind, vertices: Vec<usize>, edges: Vec<[usize; 2]>) -> Violation {
    Violation {
        kind,
        vertices,
        edges,
    }
}

pub(super) fn verify(
    host: &Graph,
    cert: &SubdivisionCertificate,
) -> Result<VerificationReport, CertificateError> {
    let pattern = &cert.pattern;
    if cert.branch.len() != pattern.n() {
        return Err(CertificateError::BranchLength {
            expected: pattern.n(),
            got: cert.branch.len(),
        });
    }
    for &v in cert.branch.iter().chain(cert.paths.values().flatten()) {
        if v >= host.n() {
            return Err(CertificateError::DanglingVertex {
                vertex: v,
                n: host.n(),
            });
        }
    }
    for (u, v) in pattern.edges() {
        if !cert.paths.contains_key(&(u, v)) {
            return Err(CertificateError::MissingPath(u, v));
        }
    }
    if let Some(&(u, v)) = cert
        .paths
        .keys()
        .find(|&&(u, v)| u >= v || !pattern.has_edge(u, v))
    {
        return Err(CertificateError::UnknownPathKey(format!("{u}-{v}")));
    }

    let mut violations = Vec::new();
    let mut owner: HashSet<usize> = HashSet::new();
    for &b in &cert.branch {
        if !owner.insert(b) {
            violations.push(violation(
                ViolationKind::BranchNotInjective,
                vec![b],
                vec![],
            ));
        }
    }
    let mut internal_owner: HashMap<usize, (usize, usize)> = HashMap::new();
    for (&(u, v), path) in &cert.paths {
        let (bu, bv) = (cert.branch[u], cert.branch[v]);
        if path.len() < 2 || path[0] != bu || path[path.len() - 1] != bv {
            let mut ends: Vec<usize> = path
                .first()
                .into_iter()
                .chain(path.last())
                .copied()
                .collect();
            ends.extend([bu, bv]);
            violations.push(violation(ViolationKind::PathEndpoints, ends, vec![]));
        }
        for w in path.windows(2) {
            if !host.has_edge(w[0], w[1]) {
                violations.push(violation(
                    ViolationKind::NonAdjacentStep,
                    vec![],
                    vec![[w[0], w[1]]],
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for &x in path {
            if !seen.insert(x) {
                violations.push(violation(ViolationKind::RepeatedVertex, vec![x], vec![]));
            }
        }
        let interior = if path.len() > 2 {
            &path[1..path.len() - 1]
        } else {
            &[][..]
        };
        for &x in interior {
            if owner.contains(&x) {
                violations.push(violation(
                    ViolationKind::InternalHitsBranch,
                    vec![x],
                    vec![],
                ));
            }
            match internal_owner.get(&x) {
                Some(&other) if other != (u, v) => {
                    violations.push(violation(ViolationKind::SharedInternal, vec![x], vec![]));
                }
                _ => {
                    internal_owner.insert(x, (u, v));
                }
            }
        }
    }
    let is_subdivision = violations.is_empty();

    // host[W] must equal the subdivision graph.
    let steps = cert.subdivision_edges();
    let vertices = cert.vertex_set();
    let mut in_w = vec![false; host.n()];
    for &v in &vertices {
        in_w[v] = true;
    }
    let mut extra = Vec::new();
    for &v in &vertices {
        for &w in host.neighbors(v) {
            if v < w && in_w[w] && !steps.contains(&(v, w)) {
                extra.push([v, w]);
            }
        }
    }
    let is_induced = is_subdivision && extra.is_empty();
    for e in extra {
        violations.push(violation(ViolationKind::ExtraEdge, e.to_vec(), vec![e]));
    }

    let mut adjacent = Vec::new();
    for i in 0..cert.branch.len() {
        for j in i + 1..cert.branch.len() {
            let (a, b) = (cert.branch[i], cert.branch[j]);
            if a != b && host.has_edge(a, b) {
                adjacent.push([a.min(b), a.max(b)]);
            }
        }
    }
    let is_proper = is_induced && adjacent.is_empty();
    for e in adjacent {
        violations.push(violation(
            ViolationKind::AdjacentBranches,
            e.to_vec(),
            vec![e],
        ));
    }
    Ok(VerificationReport {
        is_subdivision,
        is_induced,
        is_proper,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::one_subdivision;

    fn identity_cert(pattern: &Graph) -> SubdivisionCertificate {
        SubdivisionCertificate {
            pattern: pattern.clone(),
            branch: (0..pattern.n()).collect(),
            paths: pattern.edges().map(|(u, v)| ((u, v), vec![u, v])).collect(),
        }
    }

    #[test]
    fn clique_is_induced_but_not_proper() {
        let k4 = Graph::complete(4);
        let r = verify(&k4, &identity_cert(&k4)).unwrap();
        assert!(r.is_subdivision && r.is_induced && !r.is_proper);
        assert!(r.has(ViolationKind::AdjacentBranches));
    }

    #[test]
    fn chord_between_paths_is_reported() {
        let (g, cert) = one_subdivision(&Graph::complete(4));
        assert!(verify(&g, &cert).unwrap().is_proper);
        // Subdivision vertices of edges (0,1) and (2,3) are 4 and 9.
        let chorded = g.with_edges(&[(4, 9)]).unwrap();
        let r = verify(&chorded, &cert).unwrap();
        assert!(r.is_subdivision && !r.is_induced);
        assert_eq!(
            r.violations,
            vec![Violation {
                kind: ViolationKind::ExtraEdge,
                vertices: vec![4, 9],
                edges: vec![[4, 9]],
            }]
        );
    }

    #[test]
    fn malformed_certificates_are_errors() {
        let k3 = Graph::complete(3);
        let mut c = identity_cert(&k3);
        c.branch.push(0);
        assert!(matches!(
            verify(&k3, &c),
            Err(CertificateError::BranchLength { .. })
        ));
        let mut c = identity_cert(&k3);
        c.branch[0] = 7;
        assert!(matches!(
            verify(&k3, &c),
            Err(CertificateError::DanglingVertex { vertex: 7, .. })
        ));
        let mut c = identity_cert(&k3);
        c.paths.remove(&(0, 1));
        assert_eq!(verify(&k3, &c), Err(CertificateError::MissingPath(0, 1)));
    }

    #[test]
    fn non_injective_branch_is_a_violation() {
        let k3 = Graph::complete(3);
        let mut c = identity_cert(&k3);
        c.branch[2] = 0;
        c.paths.insert((0, 2), vec![0, 0]);
        c.paths.insert((1, 2), vec![1, 0]);
        let r = verify(&k3, &c).unwrap();
        assert!(!r.is_subdivision && r.has(ViolationKind::BranchNotInjective));
    }

    #[test]
    fn json_round_trip() {
        let (_, cert) = one_subdivision(&Graph::cycle(4));
        let text = cert.to_json_string();
        assert_eq!(
            SubdivisionCertificate::from_json_bytes(text.as_bytes()).unwrap(),
            cert
        );
        let reversed = r#"{"pattern": {"n": 2, "edges": [[0,1]]}, "branch": [5, 7], "paths": {"1-0": [7, 6, 5]}}"#;
        let c = SubdivisionCertificate::from_json_bytes(reversed.as_bytes()).unwrap();
        assert_eq!(c.paths[&(0, 1)], vec![5, 6, 7]);
        let bad = r#"{"pattern": {"n": 2, "edges": [[0,1]]}, "branch": [5, 7], "paths": {"0-2": [5, 7]}}"#;
        assert!(matches!(
            SubdivisionCertificate::from_json_bytes(bad.as_bytes()),
            Err(CertificateError::UnknownPathKey(_))
        ));
        assert!(matches!(
            SubdivisionCertificate::from_json_bytes(b"{\"pattern\":"),
            Err(CertificateError::Malformed(_))
        ));
    }
}
