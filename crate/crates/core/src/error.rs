use thiserror::Error;

pub type Result<T> = std::result::Result<T, SteklovError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteklovError {
    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("points belong to different space forms")]
    SpaceMismatch,

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("boundary under-resolved: Fourier degree {degree} exceeds {max} for {nodes} boundary nodes")]
    UnderResolved {
        degree: usize,
        max: usize,
        nodes: usize,
    },

    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),

    #[error(
        "factorization of {matrix} failed at pivot {pivot} (pivot value {value:.3e}, condition estimate {condition:.3e})"
    )]
    Factorization {
        matrix: &'static str,
        pivot: usize,
        value: f64,
        condition: f64,
    },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("degenerate boundary integral: {0}")]
    DegenerateBoundary(&'static str),
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(SteklovError::InvalidArgument {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn require_dimension(n: usize) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(SteklovError::InvalidArgument {
            name: "n",
            value: n as f64,
            reason: "dimension must be at least 2",
        })
    }
}
