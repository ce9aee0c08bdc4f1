use thiserror::Error;

/// Errors produced by the library and the command-line harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("domain has no interior nodes at resolution {resolution}")]
    EmptyInterior { resolution: usize },

    #[error("grid function does not belong to this domain (expected {expected} values, got {got})")]
    DomainMismatch { expected: usize, got: usize },

    #[error("function values must be finite")]
    NonFinite,

    #[error("gradient norm vanishes, ratio is undefined")]
    ZeroGradient,

    #[error("mollifier support of radius {radius} around ({x}, {y}) leaves the domain")]
    SupportEscapesDomain { x: f64, y: f64, radius: f64 },

    #[error("partition of unity has a zero denominator at node {node}")]
    ZeroPartitionDenominator { node: usize },

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("no functions selected")]
    NoFunctionsSelected,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
