use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("subgraph touches the window frontier (margin {margin}, need at least {required})")]
    MarginViolation { margin: u32, required: u32 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("invalid vertex function: {0}")]
    InvalidFunction(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("window would exceed the vertex budget of {budget}")]
    ResourceLimit { budget: usize },

    #[error("preset `{0}` is not amenable")]
    NotAmenablePreset(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quasi-isometry check failed: {0}")]
    QuasiIsometry(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
