//! Error types shared across the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or analyzing states.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Antisymmetrized product of linearly dependent fermion states.
    #[error("wedge product vanished: fermion states are linearly dependent (norm {norm:.3e})")]
    ZeroWedge { norm: f64 },

    /// Permanent/determinant kernel asked for a matrix beyond the desk-scale cap.
    #[error("matrix dimension {dim} exceeds the size limit {limit}")]
    SizeLimit { dim: usize, limit: usize },

    /// Operands disagree on statistics or on the underlying mode space.
    #[error("incompatible operands: {0}")]
    TypeMismatch(String),

    /// A state declared local to a subsystem has support outside it.
    #[error("state is not local to subsystem `{subsystem}`")]
    LocalityViolation { subsystem: String },

    /// Requested operation is outside the supported regime.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Zero-norm or otherwise degenerate input state.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Density matrix trace too far from one.
    #[error("density matrix is not normalized: trace = {trace}")]
    NotNormalized { trace: f64 },

    /// Sector selected for Schmidt analysis carries no weight.
    #[error("sector `{sector}` carries no weight")]
    EmptySector { sector: String },

    /// The two states do not share a reduced density matrix.
    #[error("states are not co-purifications: {0}")]
    NotCoPurifications(String),

    /// Supplied ensemble does not decompose the reduced density matrix.
    #[error("ensemble does not realize the reduced state: {0}")]
    NotAnEnsembleOf(String),

    /// State leaks outside the vacuum/pair qubit encoding.
    #[error("state leaks outside the qubit encoding (weight {leakage:.3e})")]
    EncodingViolation { leakage: f64 },

    /// Partition is not a disjoint cover, or has too few subsystems.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// Malformed state specification file.
    #[error("invalid state specification: {0}")]
    InvalidSpec(String),

    /// A numerical self-check failed (oracle disagreement, residual bound, ...).
    #[error("numerical contract violated: {0}")]
    ContractViolation(String),
}

impl Error {
    /// Exit code for the command-line front end: 2 for bad inputs, 3 for
    /// violated numerical contracts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotNormalized { .. } | Error::ContractViolation(_) => 3,
            _ => 2,
        }
    }
}
