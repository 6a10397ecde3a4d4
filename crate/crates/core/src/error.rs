use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precision of {requested} bits is below the minimum of {minimum}")]
    PrecisionTooLow { requested: usize, minimum: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("cannot parse {0:?} as a decimal number")]
    Parse(String),

    #[error("{points} quadrature points is below the required {required}")]
    TooFewPoints { points: usize, required: usize },

    #[error("no sign change of the saddle equation for a = {0} in [2^-30, 2^30]")]
    NoBracket(u64),
}
