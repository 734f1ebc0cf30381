use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("individual index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("self-loop at edge index {edge_index} (node {node})")]
    SelfLoop { edge_index: usize, node: usize },

    #[error("edge index {edge_index} references node {node}, but n = {n}")]
    EdgeOutOfRange { edge_index: usize, node: usize, n: usize },

    #[error("adjacency matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },

    #[error("network is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("unknown identity label {0:?}")]
    UnknownIdentity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("iterative solver did not converge in {iterations} iterations (last step {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("n = {n} exceeds the enumeration limit {limit}; use the cascade or blocking-set tools instead")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("infeasible degree sequence: {0}")]
    InfeasibleDegree(String),

    #[error("example template mismatch: {0}")]
    TemplateMismatch(String),

    /// A model invariant was breached. Indicates a bug, not bad input.
    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
