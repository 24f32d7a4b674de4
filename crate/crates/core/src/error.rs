use thiserror::Error;

/// Errors shared across the evaluation and verification layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the domain of the function being evaluated.
    #[error("domain error in {what}: argument {value} must be > {limit}")]
    Domain {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    /// Polygamma (or derivative) order beyond what the evaluator supports.
    #[error("order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: u32, max: u32 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Invalid verification-suite configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Report serialization or output failure.
    #[error("report output failed: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
