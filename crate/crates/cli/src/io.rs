//! Exit codes, input loading and output writing.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::anyhow;
use isubdiv_core::format::{load_graph, Format};
use isubdiv_core::Graph;

/// Process exit codes. Shell harnesses tell refutation from exhaustion by
/// these, so the values are fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Negative = 1,
    Malformed = 2,
    Io = 3,
    Budget = 4,
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn malformed(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            exit: Exit::Malformed,
            error: error.into(),
        }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            exit: Exit::Io,
            error: error.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(anyhow!("reading {}: {e}", path.display())))
}

/// Format from the flag, else the extension, else the content.
pub fn graph_format(path: &Path, bytes: &[u8], flag: Option<Format>) -> Format {
    flag.or_else(|| Format::from_extension(path))
        .unwrap_or_else(|| sniff(bytes))
}

fn sniff(bytes: &[u8]) -> Format {
    let text = String::from_utf8_lossy(bytes);
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return Format::Json;
    }
    let first = trimmed.lines().next().unwrap_or("");
    let numeric = first.split_whitespace().count() == 2
        && first.split_whitespace().all(|t| t.parse::<usize>().is_ok());
    if numeric {
        Format::EdgeList
    } else {
        Format::Graph6
    }
}

pub fn read_graph(path: &Path, flag: Option<Format>) -> Result<Graph, Failure> {
    let bytes = read_input(path)?;
    let format = graph_format(path, &bytes, flag);
    load_graph(&bytes, format).map_err(|e| Failure::malformed(anyhow!("{}: {e}", path.display())))
}

/// Writes to `path`, or to stdout when there is none.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, bytes).map_err(|e| Failure::io(anyhow!("writing {}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io(anyhow!("writing stdout: {e}")))
        }
    }
}

pub fn json_line(value: &impl serde::Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("output serializes");
    bytes.push(b'\n');
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffs_formats() {
        assert_eq!(sniff(b"  {\"n\": 2}"), Format::Json);
        assert_eq!(sniff(b"3 2\n0 1\n1 2\n"), Format::EdgeList);
        assert_eq!(sniff(b"Bw\n"), Format::Graph6);
        assert_eq!(sniff(b">>graph6<<Bw"), Format::Graph6);
    }
}
