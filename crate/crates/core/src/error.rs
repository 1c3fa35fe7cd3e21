use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation was called with inputs that violate its contract
    /// (e.g. a non-Hermitian generator, or a frame that does not match the modulation).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A Bessel sideband sum was truncated too aggressively.
    #[error("sideband truncation n_max = {n_max} keeps only {mass:.6} of the Bessel weight for argument {argument}")]
    Truncation { n_max: u32, argument: f64, mass: f64 },

    /// The adaptive integrator lost norm or could not reach the requested accuracy.
    #[error("integration failure at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    /// The lattice Fock space exceeds the configured dimension cap.
    #[error("basis dimension {dim} exceeds cap {cap}")]
    CapExceeded { dim: u128, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
