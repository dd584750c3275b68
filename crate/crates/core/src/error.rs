use thiserror::Error;

use crate::treedecomp::TdViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("edge {{{u}, {v}}} has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("graph is not connected ({components} components); solve each component separately")]
    Disconnected { components: usize },

    #[error("{what}: size {actual} exceeds cap {cap}; {advice}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
        advice: &'static str,
    },

    #[error("DP state budget of {budget} exceeded at bag width {width} with k = {k}")]
    StateBudget { budget: usize, width: usize, k: u32 },

    #[error("parameters must satisfy p >= 1 and q >= 1 (got p = {p}, q = {q})")]
    InvalidParams { p: u32, q: u32 },

    #[error("labeling is not total: vertex {0} has no label")]
    NotTotal(usize),

    #[error("labeling is empty")]
    EmptyLabeling,

    #[error("scale factor must be positive")]
    ZeroScale,

    #[error("bag {node} references vertex {vertex} outside the graph")]
    BagOutOfRange { node: usize, vertex: usize },

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(TdViolation),

    #[error("vertex set is not a twin cover: non-twin edge {{{0}, {1}}} is uncovered")]
    NotTwinCover(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("variable x{0} has no upper bound")]
    UnboundedVariable(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that refuse work because a configured limit was hit.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::StateBudget { .. })
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
