use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter lies outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse rational from `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("block view needs an even number of terms, got {0}")]
    OddLength(usize),

    #[error("{x} is not representable in base {base} with {integer_places} integer place(s)")]
    NotRepresentable {
        x: String,
        base: String,
        integer_places: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
