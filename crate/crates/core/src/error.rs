use thiserror::Error;

/// Graph construction and parsing failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl GraphError {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        GraphError::Parse {
            offset,
            message: message.into(),
        }
    }
}

/// Inputs outside an operation's domain (as opposed to a negative answer).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("domain error: {0}")]
pub struct DomainError(pub String);

/// A certificate that cannot even be evaluated against its host.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("branch map has {got} entries but the pattern has {expected} vertices")]
    BranchLength { expected: usize, got: usize },
    #[error("vertex {vertex} is not a host vertex (host has {n})")]
    DanglingVertex { vertex: usize, n: usize },
    #[error("no path given for pattern edge {0}-{1}")]
    MissingPath(usize, usize),
    #[error("path key {0} does not name a pattern edge")]
    UnknownPathKey(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// Failures of the constructive pipeline that are not plain "not found".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("stage {stage}: precondition failed: {message}")]
    Precondition { stage: String, message: String },
    #[error("stage {stage}: structural error: {message}")]
    Structural { stage: String, message: String },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("infeasible parameters, violated: {}", violated.join("; "))]
    Infeasible { violated: Vec<String> },
    /// Nothing found; not a refutation.
    #[error("stage {stage}: nothing found: {reason}")]
    Absent { stage: String, reason: String },
}

impl PipelineError {
    pub(crate) fn precondition(stage: &str, message: impl Into<String>) -> Self {
        PipelineError::Precondition {
            stage: stage.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn structural(stage: &str, message: impl Into<String>) -> Self {
        PipelineError::Structural {
            stage: stage.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn absent(stage: &str, reason: impl Into<String>) -> Self {
        PipelineError::Absent {
            stage: stage.to_string(),
            reason: reason.into(),
        }
    }

    /// Stage the failure is attributed to, if any.
    pub fn stage(&self) -> Option<&str> {
        match self {
            PipelineError::Precondition { stage, .. }
            | PipelineError::Structural { stage, .. }
            | PipelineError::Absent { stage, .. } => Some(stage),
            PipelineError::Parameters(_) | PipelineError::Infeasible { .. } => None,
        }
    }
}
