use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("arc {tail} -> {head} has nonpositive weight {weight}")]
    NonpositiveWeight {
        tail: String,
        head: String,
        weight: String,
    },

    #[error("loop arc at vertex {0}")]
    Loop(String),

    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(String, String),

    #[error("a digraph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("vertex index {0} out of range")]
    NoSuchVertex(usize),

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("matrix is singular")]
    Singular,

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: String,
        expected: String,
    },

    #[error("enumeration guardrail exceeded: n = {n}, |E| = {arcs} (limits n <= 10, |E| <= 20)")]
    Guardrail { n: usize, arcs: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("triangle inequality needs a symmetric matrix")]
    Asymmetric,

    #[error("{0}")]
    Precondition(String),

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn out_of_range(
        name: &'static str,
        value: impl ToString,
        expected: impl Into<String>,
    ) -> Self {
        Error::OutOfRange {
            name,
            value: value.to_string(),
            expected: expected.into(),
        }
    }
}
