use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("grid resolution {got} is below the minimum {min}")]
    ResolutionTooSmall { got: usize, min: usize },
    #[error("support function is not differentiable at this direction ({0})")]
    NotDifferentiable(String),
    #[error("support function is not positive ({0})")]
    NonPositiveSupport(f64),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("odd harmonic of degree {0} in an even expansion")]
    OddHarmonic(usize),
    #[error("order {got} out of range for dimension {n}")]
    OrderOutOfRange { got: usize, n: usize },
    #[error("argument sizes disagree: {0}")]
    SizeMismatch(String),
    #[error("body is not smooth enough for this method: {0}")]
    NotSmooth(String),
    #[error("no volume method applies: {0}")]
    NoVolumeMethod(String),
    #[error("Wulff shape is degenerate: {0}")]
    DegenerateWulff(String),
    #[error("Wulff linear program is unbounded (direction set does not surround the origin)")]
    UnboundedWulff,
    #[error("linear program failed: {0}")]
    LinearProgram(String),
    #[error("mass matrix is ill conditioned (condition {0:.3e})")]
    IllConditionedMass(f64),
    #[error("eigen solver failed: {0}")]
    EigenFailure(String),
    #[error("counterexample search failed: {0}")]
    SearchFailure(String),
    #[error("linearized operator is singular at degree {degree} (factor {factor:.3e})")]
    SingularOperator { degree: usize, factor: f64 },
    #[error("finite-difference step {0:e} is too small")]
    StepUnderflow(f64),
    #[error("Newton iteration lost convexity (min principal radius {0:.3e})")]
    ConvexityLost(f64),
    #[error("Newton iteration diverged (residual {0:.3e})")]
    Divergence(f64),
    #[error("Newton iteration hit the iteration cap (residual {0:.3e})")]
    MaxIterations(f64),
    #[error("line search could not reduce the residual (residual {0:.3e})")]
    LineSearchFailed(f64),
    #[error("(p, j) = (0, 1) is excluded: the closing degenerate example solves the equation without being a smooth body; enable the excluded regime explicitly to run it")]
    ExcludedRegime,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotDifferentiable(_)
                | Error::DegenerateWulff(_)
                | Error::UnboundedWulff
                | Error::LinearProgram(_)
                | Error::IllConditionedMass(_)
                | Error::EigenFailure(_)
                | Error::SearchFailure(_)
                | Error::SingularOperator { .. }
                | Error::StepUnderflow(_)
                | Error::ConvexityLost(_)
                | Error::Divergence(_)
                | Error::MaxIterations(_)
                | Error::LineSearchFailed(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
