use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulus n = {0}: the polygon order must be at least 1")]
    InvalidModulus(usize),

    #[error("index {index} out of range for modulus {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid series configuration: {0}")]
    InvalidConfig(String),

    #[error("series did not converge within {terms} terms (last term magnitude {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },

    #[error("non-finite value encountered while evaluating {0}")]
    NonFinite(&'static str),

    #[error("invalid Fock dimension {0}: need at least 2 basis states")]
    InvalidDim(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error(
        "truncation tail mass {tail:e} exceeds tolerance at dim {dim}; use dim >= {suggested}"
    )]
    Truncation {
        tail: f64,
        dim: usize,
        suggested: usize,
    },

    #[error("degenerate normalization for component k = {k}: the mod-n exponential vanishes")]
    DegenerateNormalization { k: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    Unnormalized { norm_sqr: f64 },

    #[error("closed-form uncertainty product is only valid for n >= 3 (got n = {0}); use the Fock-basis path")]
    UnsupportedFormula(usize),

    #[error("unsafe parameters: {0}")]
    UnsafeParameters(String),

    #[error("Hermite recurrence overflowed at order {order} for x = {x}")]
    HermiteOverflow { order: usize, x: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// True for failures caused by the caller's parameters rather than by
    /// the numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidModulus(_)
                | Error::IndexOutOfRange { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidDim(_)
                | Error::DimMismatch { .. }
                | Error::UnsupportedFormula(_)
                | Error::UnsafeParameters(_)
                | Error::InvalidGrid(_)
        )
    }
}
