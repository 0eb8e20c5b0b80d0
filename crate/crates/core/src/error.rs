use thiserror::Error;

/// Errors raised by the simulator.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// failing computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cutoff {cutoff} is inadequate (needs at least {required}): {context}")]
    TruncationInadequate {
        cutoff: usize,
        required: usize,
        context: String,
    },

    #[error("truncation overflow: {mass:.3e} population beyond the retained photon numbers")]
    TruncationOverflow { mass: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("Fano factor undefined for zero mean photon number")]
    FanoUndefined,

    #[error("outcome n = {n} has negligible probability {probability:.3e}")]
    EmptyOutcome { n: usize, probability: f64 },

    #[error("outcome n = {n} leaves only one branch populated; the heralded state is separable")]
    SeparableOutcome { n: usize, probability: f64 },

    #[error("index {index} out of range (max {max})")]
    OutOfRange { index: usize, max: usize },

    #[error("state is not normalized (norm {norm:.15})")]
    NotNormalized { norm: f64 },

    #[error("linear system is ill-conditioned (condition number {condition_number:.3e})")]
    IllConditioned { condition_number: f64 },

    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
