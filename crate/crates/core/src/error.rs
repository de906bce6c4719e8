use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain must contain at least one label")]
    EmptyDomain,
    #[error("label {label} is outside a domain of size {domain}")]
    LabelOutOfDomain { label: usize, domain: usize },
    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("domain size mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("node {node} is out of range for an instance with {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("{what} requires {required} states but the cap is {cap}")]
    CapExceeded {
        what: String,
        required: u128,
        cap: u128,
    },
    #[error("unknown cost function `{0}`")]
    UnknownFunction(String),
    #[error("duplicate cost function name `{0}`")]
    DuplicateName(String),
    #[error("language has no cost functions")]
    EmptyLanguage,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("not symmetric: {0}")]
    NotSymmetric(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not an STP multimorphism: {0}")]
    NotStp(String),
    #[error("invalid flip: {0}")]
    InvalidFlip(String),
    #[error("language does not admit the pair: {0}")]
    NotAdmitted(String),
    #[error("check `{check}` failed: {detail}")]
    AuditFailed { check: &'static str, detail: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, required: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            required,
            cap,
        }
    }
}
