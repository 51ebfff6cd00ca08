use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input files, invalid parameters, or grid limits exceeded.
    #[error("schema: {0}")]
    Schema(String),

    /// Domain violations: missing labels, empty zero lists, bad preconditions.
    #[error("domain: {0}")]
    Domain(String),

    /// A zero was handed to the far-zero genus policy although it lies
    /// inside the evaluation radius.
    #[error("genus policy: {0}")]
    Policy(String),

    /// The grid is too coarse for the requested operation.
    #[error("resolution: {0}")]
    Resolution(String),

    /// The evaluated function dips below the zero tolerance on a curve or set.
    #[error("zero on contour: {0}")]
    ZeroOnContour(String),

    /// Evaluation overflowed the floating-point range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Two logarithm grids could not be glued into a single branch.
    #[error("gluing: {0}")]
    Gluing(String),

    /// A witness construction step failed.
    #[error("construction: {0}")]
    Construction(String),

    /// Adaptive refinement exhausted its budget without converging.
    #[error("nonconvergence: {0}")]
    NonConvergence(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// CLI exit code: 0 success, 2 schema, 3 resolution, 4 construction, 5 nonconvergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) | Error::Domain(_) | Error::Policy(_) | Error::Json(_) => 2,
            Error::Resolution(_) => 3,
            Error::ZeroOnContour(_)
            | Error::Overflow(_)
            | Error::Gluing(_)
            | Error::Construction(_) => 4,
            Error::NonConvergence(_) => 5,
            Error::Io(_) => 1,
        }
    }
}
