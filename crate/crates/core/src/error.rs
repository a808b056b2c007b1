use thiserror::Error;

use crate::pgraph::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("duplicate attribute `{0}`")]
    DuplicateAttribute(String),

    #[error("schema has {0} attributes; at most 64 are supported")]
    TooManyAttributes(usize),

    #[error("attribute `{attr}`: value `{value}` is not in its ranked domain")]
    UnrankableValue { attr: String, value: String },

    #[error("attribute `{attr}`: `{value}` is not a number with at most {scale} decimal places")]
    BadNumber {
        attr: String,
        value: String,
        scale: u32,
    },

    #[error("attribute `{attr}`: expected a {expected} value")]
    KindMismatch { attr: String, expected: &'static str },

    #[error("tuple `{id}` has {got} values, schema has {expected} attributes")]
    Arity {
        id: String,
        got: usize,
        expected: usize,
    },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("duplicate tuple id `{0}`")]
    DuplicateId(String),

    #[error("unknown tuple id `{0}`")]
    UnknownId(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("json: {0}")]
    Json(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("attribute `{0}` is used more than once")]
    RepeatedAttribute(String),

    #[error("attribute sets over {left} and {right} attributes cannot be compared")]
    SchemaMismatch { left: usize, right: usize },

    #[error("not a p-graph: {0}")]
    InvalidGraph(Violation),

    #[error("rule cannot be applied: {0}")]
    RuleShape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no favoring relation exists: `{dominator}` dominates superior example `{superior}` under every p-skyline relation")]
    NotFavorable { dominator: String, superior: String },

    #[error("exhaustive search supports at most {limit} attributes, schema has {width}")]
    TooWide { width: usize, limit: usize },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
