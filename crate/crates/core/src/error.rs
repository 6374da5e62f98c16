use thiserror::Error;

/// Errors produced by kernel operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input vector length does not match what the operation expects.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A point left the generator's domain. `index` names the offending
    /// coordinate when it can be attributed to one.
    #[error("domain violation{}: {reason}", fmt_index(.index))]
    Domain { index: Option<usize>, reason: String },

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    /// A coordinate tag is not registered with the manifold's atlas.
    #[error("unknown coordinate system `{tag}`")]
    UnknownCoords { tag: String },

    /// No chain of registered conversions connects the two tags.
    #[error("no conversion path from `{from}` to `{to}`")]
    NoConversionPath { from: String, to: String },

    /// An iterative solver failed to reach its tolerance.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    Convergence { what: String, iterations: usize, residual: f64 },

    /// The two bisector anchors coincide, so no hyperplane is defined.
    #[error("bisector is degenerate: the two points coincide in the relevant coordinates")]
    DegenerateBisector,

    /// A matrix that must be symmetric positive definite is not.
    #[error("matrix is not symmetric positive definite: {reason}")]
    NotSpd { reason: String },

    /// Invalid argument outside the numeric domain machinery (weights, flags, sizes).
    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },
}

fn fmt_index(index: &Option<usize>) -> String {
    match index {
        Some(i) => format!(" at coordinate {i}"),
        None => String::new(),
    }
}

impl Error {
    pub fn domain(index: impl Into<Option<usize>>, reason: impl Into<String>) -> Self {
        Error::Domain { index: index.into(), reason: reason.into() }
    }

    pub fn non_finite(context: impl Into<String>) -> Self {
        Error::NonFinite { context: context.into() }
    }

    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidArgument { reason: reason.into() }
    }

    pub fn convergence(what: impl Into<String>, iterations: usize, residual: f64) -> Self {
        Error::Convergence { what: what.into(), iterations, residual }
    }

    pub fn not_spd(reason: impl Into<String>) -> Self {
        Error::NotSpd { reason: reason.into() }
    }

    /// True for failures of iterative numerics rather than of input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::NonFinite { .. } | Error::NotSpd { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Entry-point check used by operations that take raw vectors.
pub fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Rejects NaN/inf coordinates before they propagate into the algebra.
pub fn check_finite(data: &[f64], context: &str) -> Result<()> {
    if data.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::non_finite(context))
    }
}
