use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Operator(#[from] mevisc::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what} at step {step}, cell ({i}, {j})")]
    NonPhysical {
        step: usize,
        i: usize,
        j: usize,
        what: &'static str,
    },
}
