use thiserror::Error;

/// Errors produced by the exact-arithmetic toolkit.
#[derive(Debug, Error)]
pub enum SymmetrizeError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid rational '{input}': {reason}")]
    InvalidRational { input: String, reason: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pitch {pitch} exceeds the largest admissible value {max_admissible}")]
    PitchTooLarge {
        pitch: String,
        max_admissible: String,
    },

    #[error("covering certificate failed verification")]
    CertificateInvalid,

    #[error("malformed input file: {0}")]
    Malformed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
