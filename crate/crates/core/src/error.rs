use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input rejected before any computation was attempted.
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A zeta value or integral needed by the expansion diverges.
    #[error("divergent: {0}")]
    Divergent(String),
    /// A string pole lands on an exponent already used by the bulk expansion.
    #[error("pole at {pole} collides with bulk exponent {exponent}")]
    PoleCollision { pole: String, exponent: i64 },
    /// A numerical routine failed to reach its target accuracy.
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("requested order {requested} exceeds the configured maximum {max}")]
    OrderTooLarge { requested: u32, max: u32 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
