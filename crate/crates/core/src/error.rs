use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported order {0} (expected 4 or 6)")]
    UnsupportedOrder(u32),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid stencil location {loc} for order {order}")]
    InvalidLocation { order: u32, loc: String },
    #[error("singular Taylor system")]
    Singular,
    #[error("field too short: {len} values, operator needs {needed}")]
    FieldTooShort { len: usize, needed: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },
}
