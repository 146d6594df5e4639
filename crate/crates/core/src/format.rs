//! Graph serialization: graph6, a plain edge list and JSON.
//!
//! * graph6: the standard ASCII encoding (short form for `n <= 62`, the
//!   four-byte `~` form up to 258047 vertices). An optional `>>graph6<<`
//!   header and trailing newline are accepted.
//! * edge list: a header line `n m` followed by `m` lines `u v`, 0-based.
//! * JSON: `{"n": int, "edges": [[u, v], ...]}`, 0-based.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Graph6,
    EdgeList,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "edge-list" | "edgelist" | "el" => Ok(Format::EdgeList),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

impl Format {
    /// Guess from a file extension.
    pub fn from_extension(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "g6" | "graph6" => Some(Format::Graph6),
            "json" => Some(Format::Json),
            "el" | "edges" | "txt" => Some(Format::EdgeList),
            _ => None,
        }
    }
}

pub fn load_graph(bytes: &[u8], format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::Graph6 => from_graph6(bytes),
        Format::EdgeList => from_edge_list(bytes),
        Format::Json => from_json(bytes),
    }
}

pub fn save_graph(g: &Graph, format: Format) -> Vec<u8> {
    match format {
        Format::Graph6 => {
            let mut s = to_graph6(g).into_bytes();
            s.push(b'\n');
            s
        }
        Format::EdgeList => to_edge_list(g).into_bytes(),
        Format::Json => {
            let mut s = to_json(g).into_bytes();
            s.push(b'\n');
            s
        }
    }
}

const G6_HEADER: &[u8] = b">>graph6<<";

/// graph6 encoding without header or newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    assert!(
        n <= 258_047,
        "graph6 long form supports at most 258047 vertices"
    );
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|x| x as u8 + 63));
    }
    // Upper triangle, column by column: (0,1), (0,2), (1,2), (0,3), ...
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

pub fn from_graph6(bytes: &[u8]) -> Result<Graph, GraphError> {
    let mut start = 0;
    if bytes.starts_with(G6_HEADER) {
        start = G6_HEADER.len();
    }
    let mut end = bytes.len();
    while end > start && matches!(bytes[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let body = &bytes[start..end];
    let sextet = |i: usize| -> Result<usize, GraphError> {
        let b = body[i];
        if (63..=126).contains(&b) {
            Ok((b - 63) as usize)
        } else {
            Err(GraphError::parse(
                start + i,
                format!("byte {b:#04x} outside graph6 range"),
            ))
        }
    };
    if body.is_empty() {
        return Err(GraphError::parse(start, "empty graph6 string"));
    }
    let (n, mut pos) = if body[0] == b'~' {
        if body.len() > 1 && body[1] == b'~' {
            return Err(GraphError::parse(
                start + 1,
                "8-byte graph6 size form is not supported",
            ));
        }
        if body.len() < 4 {
            return Err(GraphError::parse(
                start + body.len(),
                "truncated graph6 size",
            ));
        }
        let n = (sextet(1)? << 12) | (sextet(2)? << 6) | sextet(3)?;
        (n, 4)
    } else {
        (sextet(0)?, 1)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if body.len() - pos != need {
        return Err(GraphError::parse(
            start + body.len().min(pos + need),
            format!(
                "expected {need} data bytes for n = {n}, found {}",
                body.len() - pos
            ),
        ));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    let mut cur = 0usize;
    let mut left = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            if bit == nbits {
                break 'outer;
            }
            if left == 0 {
                cur = sextet(pos)?;
                pos += 1;
                left = 6;
            }
            left -= 1;
            if (cur >> left) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    if left > 0 && cur & ((1 << left) - 1) != 0 {
        return Err(GraphError::parse(
            start + pos - 1,
            "nonzero graph6 padding bits",
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn from_edge_list(bytes: &[u8]) -> Result<Graph, GraphError> {
    let mut tokens = Tokens::new(bytes);
    let n = tokens.next_usize("vertex count")?;
    let m = tokens.next_usize("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = tokens.next_usize("edge endpoint")?;
        let v = tokens.next_usize("edge endpoint")?;
        edges.push((u, v));
    }
    if let Some((off, _)) = tokens.next_token() {
        return Err(GraphError::parse(
            off,
            format!("trailing data after {m} edges"),
        ));
    }
    Graph::from_edges(n, edges)
}

struct Tokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Tokens { bytes, pos: 0 }
    }

    fn next_token(&mut self) -> Option<(usize, &'a [u8])> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos == self.bytes.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        Some((start, &self.bytes[start..self.pos]))
    }

    fn next_usize(&mut self, what: &str) -> Result<usize, GraphError> {
        let (off, tok) = self
            .next_token()
            .ok_or_else(|| GraphError::parse(self.bytes.len(), format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                GraphError::parse(
                    off,
                    format!("invalid {what} {:?}", String::from_utf8_lossy(tok)),
                )
            })
    }
}

/// JSON wire form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        Graph::from_edges(j.n, j.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph json serializes")
}

pub fn from_json(bytes: &[u8]) -> Result<Graph, GraphError> {
    let j: GraphJson = serde_json::from_slice(bytes).map_err(|e| json_error(bytes, &e))?;
    Graph::try_from(j)
}

/// Converts serde_json's line/column into a byte offset.
pub(crate) fn json_error(bytes: &[u8], e: &serde_json::Error) -> GraphError {
    let mut line = 1;
    let mut offset = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if line == e.line() {
            offset = i;
            break;
        }
        if b == b'\n' {
            line += 1;
        }
        offset = i + 1;
    }
    GraphError::parse(
        (offset + e.column().saturating_sub(1)).min(bytes.len()),
        e.to_string(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph6_known_strings() {
        // Reference encodings produced by nauty-compatible encoders.
        assert_eq!(to_graph6(&Graph::cycle(5)), "Dhc");
        assert_eq!(to_graph6(&Graph::petersen()), "IheA@GUAo");
        let c5 = from_graph6(b"Dhc\n").unwrap();
        assert_eq!(c5, Graph::cycle(5));
        let p5 = from_graph6(b"DQc").unwrap();
        assert_eq!(
            p5.edges().collect::<Vec<_>>(),
            vec![(0, 2), (0, 4), (1, 3), (3, 4)]
        );
        assert_eq!(from_graph6(b">>graph6<<Dhc").unwrap(), c5);
        assert_eq!(from_graph6(b"@").unwrap(), Graph::empty(1));
        assert_eq!(from_graph6(b"?").unwrap(), Graph::empty(0));
    }

    #[test]
    fn graph6_long_form() {
        let g = Graph::cycle(70);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(from_graph6(s.as_bytes()).unwrap(), g);
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        match from_graph6(b"Dh") {
            Err(GraphError::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        match from_graph6(b"D\x01c") {
            Err(GraphError::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn edge_list_cases() {
        let g = from_edge_list(b"3 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 0));
        assert_eq!(
            from_edge_list(b"2 1\n0 0\n"),
            Err(GraphError::SelfLoop { vertex: 0 })
        );
        assert_eq!(
            from_edge_list(b"3 2\n0 1\n1 0\n"),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        );
        match from_edge_list(b"3 1\n0 x\n") {
            Err(GraphError::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            from_edge_list(b"3 2\n0 1\n"),
            Err(GraphError::Parse { .. })
        ));
    }

    #[test]
    fn json_cases() {
        let g = from_json(br#"{"n": 4, "edges": [[0,1],[2,3]]}"#).unwrap();
        assert_eq!(g.m(), 2);
        assert!(matches!(
            from_json(br#"{"n": 4, "edges": [[0,1]"#),
            Err(GraphError::Parse { .. })
        ));
        assert_eq!(
            from_json(br#"{"n": 2, "edges": [[1,1]]}"#),
            Err(GraphError::SelfLoop { vertex: 1 })
        );
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn every_format_round_trips(g in arb_graph(70)) {
            for f in [Format::Graph6, Format::EdgeList, Format::Json] {
                let bytes = save_graph(&g, f);
                prop_assert_eq!(&load_graph(&bytes, f).unwrap(), &g);
            }
            let s = to_graph6(&g);
            prop_assert_eq!(to_graph6(&from_graph6(s.as_bytes()).unwrap()), s);
        }
    }
}
