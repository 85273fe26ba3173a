use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator has no support above the eigenvalue cutoff")]
    ZeroOperator,

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("channel is not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("channel is not completely positive (min Choi eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: &'static str },

    #[error("ensemble has no members")]
    EmptyEnsemble,

    #[error("probabilities sum to {sum}, expected 1")]
    InvalidProbabilities { sum: f64 },

    #[error("ensemble member {index} is not pure (second eigenvalue {second_eigenvalue:e})")]
    NotPure {
        index: usize,
        second_eigenvalue: f64,
    },

    #[error(
        "evidence has weight {weight:e} outside the support of the predicted output state; \
         enable support projection to retrodict on the supported part"
    )]
    SupportViolation { weight: f64 },

    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: &'static str },

    #[error("evidence assigns weight to outcome {outcome}, which has zero predicted probability")]
    UnsupportedEvidence { outcome: usize },

    #[error("internal consistency check `{what}` failed (deviation {deviation:e})")]
    Consistency { what: &'static str, deviation: f64 },

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;
