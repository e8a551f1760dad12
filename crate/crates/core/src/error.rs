use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: max |H - H^dagger| = {norm:.3e}")]
    NotHermitian { norm: f64 },

    #[error("evolution integrity violated: {0}")]
    Integrity(String),

    #[error("invalid qubit index {0} (expected 1..=3)")]
    QubitIndex(usize),

    #[error("qubit state is not normalized: |alpha|^2 + |beta|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("device parameters outside the TL regime: {0}")]
    Regime(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parameter file: {0}")]
    ParamFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
