use thiserror::Error;

/// Errors shared by every part of the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex set has width {found}, graph system has {expected} vertices")]
    WidthMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} out of range for {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("layer {layer} out of range (m = {m})")]
    LayerOutOfRange { layer: usize, m: usize },

    #[error("conflict graph may not contain the self-loop ({0}, {0})")]
    ConflictSelfLoop(usize),

    #[error("a graph system needs at least one directed layer")]
    NoLayers,

    #[error("input set is not independent: {0} and {1} conflict")]
    NotIndependent(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("budget exceeded")]
    BudgetExceeded,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
