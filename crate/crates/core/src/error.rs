//! Error taxonomy shared across the workspace.

use thiserror::Error;

/// Errors raised by system construction, factorization, and inversion.
#[derive(Debug, Error)]
pub enum Error {
    /// A polynomial system violates a structural rule (length mismatch,
    /// zero leading coefficient, family invariant).
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// A node set is unusable (wrong length, repeated or zero nodes).
    #[error("invalid nodes: {0}")]
    InvalidNodes(String),

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Elimination hit a pivot column that is numerically zero.
    #[error("numerically singular at elimination step {step}")]
    NumericallySingular { step: usize },

    /// A triangular basis matrix has a vanishing diagonal entry.
    #[error("singular basis matrix at column {column}")]
    SingularBasis { column: usize },
}

/// Workspace-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
