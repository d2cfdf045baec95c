//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical precondition on the inputs is violated (non-positive
    /// energy, position outside the cavity, degenerate geometry, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested evolution time is outside the second-order regime:
    /// t²·max(L₁, L₂) exceeded 1.0.
    #[error("perturbative regime violated: t^2 max(L1, L2) = {t2_l:.6e} > 1")]
    PerturbativeRegime { t2_l: f64 },

    /// A matrix that should be a density matrix is not one.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A numerical routine failed to converge or left residuals above
    /// tolerance.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Configuration text could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),

    /// Sweep specification is inconsistent.
    #[error("sweep spec error: {0}")]
    Spec(String),

    /// Unknown figure recipe name.
    #[error("unknown recipe `{name}`; available: {available}")]
    UnknownRecipe { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;
