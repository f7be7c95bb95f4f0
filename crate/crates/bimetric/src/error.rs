//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed expression source.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// Identifier that names neither a chart coordinate nor a function.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// Call syntax applied to a name that is not a known function.
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    /// Evaluation left the domain of an operation (log of a non-positive
    /// value, division by zero, ...), or produced a non-finite value or
    /// derivative. The offset points at the offending expression node.
    #[error("domain error at byte {offset}: {message}")]
    Domain { offset: usize, message: String },

    /// A point failed a chart's domain guard, or a finite-difference stencil
    /// stepped outside the guarded region.
    #[error("singular point {point}: {reason}")]
    SingularPoint { point: String, reason: String },

    /// Cholesky factorization of a metric value matrix failed.
    #[error("metric `{metric}` is not positive-definite at {point}")]
    NotPositiveDefinite { metric: String, point: String },

    /// Operands live on incompatible charts.
    #[error("chart mismatch: {message}")]
    ChartMismatch { message: String },

    /// Tensor shape or index-slot violation.
    #[error("shape error: {message}")]
    Shape { message: String },

    /// A computed tensor contains NaN or infinity.
    #[error("non-finite components in {context}")]
    NonFinite { context: String },

    /// Metric manifest failed schema validation.
    #[error("manifest error: {message}")]
    Manifest { message: String },

    #[error("no builtin metric named `{name}`")]
    UnknownBuiltin { name: String },

    /// Bad harness configuration: wrong metric count, unknown check name, ...
    #[error("configuration error: {message}")]
    Config { message: String },

    /// The intersection of the declared sample regions contains no
    /// admissible points.
    #[error("sample region intersection is empty or fully excluded by domain guards")]
    EmptyRegion,

    #[error("unsupported: {message}")]
    Unsupported { message: String },
}

impl Error {
    pub(crate) fn shape(message: impl Into<String>) -> Self {
        Error::Shape {
            message: message.into(),
        }
    }

    pub(crate) fn config(message: impl Into<String>) -> Self {
        Error::Config {
            message: message.into(),
        }
    }

    pub(crate) fn manifest(message: impl Into<String>) -> Self {
        Error::Manifest {
            message: message.into(),
        }
    }
}
