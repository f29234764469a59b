use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Shapes of two objects that must agree do not.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A documented precondition of an operation was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The operation is not defined for this kind of input.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Zero-error zero-disturbance measurement requested in the tradeoff
    /// regime (the ideal distribution of the measured observable does not
    /// majorize the other one).
    #[error("no zero-error zero-disturbance basis exists: {0}")]
    NoZezd(String),

    /// The input is degenerate in a way that leaves the answer undetermined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Guard against exponential blow-up of an enumeration.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Structured input failed validation against a numeric invariant.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Structured input could not be parsed at all.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
