use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} out of range for a graph with {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("cannot parse graph spec {input:?}: {reason}")]
    SpecParse { input: String, reason: String },

    #[error("lattice basis is degenerate (determinant 0)")]
    DegenerateLattice,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no ({t},{r})-broadcasting tower set exists on {spec}")]
    Infeasible { spec: String, t: u64, r: u64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
