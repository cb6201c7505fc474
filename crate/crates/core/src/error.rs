use thiserror::Error;

/// Errors raised by the numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("chart violation: {0}")]
    ChartViolation(String),

    #[error("point off the energy shell: {0}")]
    ShellViolation(String),

    #[error("integrator failed to converge: {0}")]
    NoConvergence(String),

    #[error("operation not supported for model {0}")]
    UnsupportedModel(String),

    #[error("underresolved: {0}")]
    Underresolved(String),

    #[error("degree overflow at k = {0}")]
    DegreeOverflow(usize),

    #[error("quadrature too coarse: norm moved by {0:.3e} under refinement")]
    QuadratureTooCoarse(f64),

    #[error("grid resolution mismatch: {0}")]
    ResolutionMismatch(String),

    #[error("empty support at tau = {0}")]
    EmptySupport(f64),

    #[error("bad window: {0}")]
    BadWindow(String),

    #[error("box scale {0} outside [0.02, 0.5]")]
    ScaleOutOfRange(f64),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("ladder mismatch: {0}")]
    LadderMismatch(String),

    #[error("point in the classically forbidden region: {0}")]
    ForbiddenRegion(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
