use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown {kind} `{name}`")]
    UnknownIdentifier { kind: &'static str, name: String },

    #[error("duplicate {kind} `{name}`")]
    DuplicateIdentifier { kind: &'static str, name: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("index {0} out of range")]
    InvalidIndex(usize),

    #[error("resource limit exceeded: {what} needs {required}, cap is {cap}")]
    ResourceLimit {
        what: String,
        cap: u128,
        required: u128,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("connective `{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown connective `{0}`")]
    UnknownConnective(String),

    #[error("proposition letter `{0}` has no value")]
    Unassigned(String),

    #[error("incompatible frame: {0}")]
    Incompatible(String),

    #[error("operation is not normal: {0}")]
    NotNormal(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn limit(what: impl Into<String>, cap: u128, required: u128) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            cap,
            required,
        }
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
