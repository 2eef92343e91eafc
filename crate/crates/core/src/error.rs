use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polyhedron is unbounded")]
    UnboundedInput,

    #[error("maximal cone index {0} is out of range")]
    InvalidCone(usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("filtration data fails the compatibility condition on {0} maximal cone(s)")]
    IncompatibleData(usize),

    #[error("character support is unbounded; the rays do not positively span")]
    UnboundedSupport,

    #[error("admissible set count {count} exceeds the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("ray matrix of the flag cone is not unimodular")]
    NotUnimodular,
}
