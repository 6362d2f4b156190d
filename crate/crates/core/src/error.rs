use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// geometric backends, the zeta evaluators and the root finders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported drum kind for this operation: {0}")]
    UnsupportedKind(String),
    #[error("tube-volume method not available: {0}")]
    MethodNotAvailable(String),
    #[error("Re s = {re_s} is at or below the abscissa of convergence {abscissa}")]
    DivergentAbscissa { re_s: f64, abscissa: f64 },
    #[error("s outside the admissible strip: {0}")]
    StripViolation(String),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("window boundary stays degenerate after {attempts} perturbation attempts")]
    BoundaryDegenerate { attempts: u32 },
    #[error("maximum subdivision depth {0} exceeded")]
    MaxSubdivisionDepth(u32),
    #[error("pole remains on or near the contour after {attempts} shrink attempts")]
    PoleOnContour { attempts: u32 },
    #[error("screen abscissa within {0} of a pole real part")]
    PoleTooClose(f64),
    #[error("samples span {got:.2} decades, need at least {need:.2}")]
    InsufficientSpan { got: f64, need: f64 },
    #[error("no closed-form zeta expression for this drum: {0}")]
    NoClosedForm(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("pruning depth cap {cap} exceeded for tolerance {tol:e}")]
    DepthCapExceeded { cap: u32, tol: f64 },
    #[error("fit residual below noise floor: {0}")]
    ResidualBelowNoise(String),
    #[error("unknown check suite: {0}")]
    UnknownSuite(String),
    #[error("check suite failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
