use thiserror::Error;

/// Errors raised by the numerical and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for the given bath family.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The decoherence integral diverges for spectral exponents below one.
    #[error("decoherence integral diverges for spectral exponent n = {exponent}")]
    Divergent { exponent: f64 },

    /// Adaptive quadrature hit its subdivision limit before meeting the tolerance.
    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    NonConvergence { achieved: f64, requested: f64 },

    /// The time-resolved visibility formula needs identical sources.
    #[error("operation requires identical sources")]
    NotIdentical,

    /// No click record survived post-selection.
    #[error("no records inside the post-selection window (of {total} total)")]
    EmptyEnsemble { total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
