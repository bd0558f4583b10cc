use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure has no atom with positive weight")]
    EmptySupport,

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("point of dimension {found} in a space of dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} does not belong to the fiber space")]
    PointOutsideSpace(String),

    #[error("invalid weight {value} at position {index}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("duplicate base label {0:?}")]
    DuplicateLabel(String),

    #[error("invalid distance matrix: {0}")]
    InvalidDistanceMatrix(String),

    #[error("base marginal mismatch at atom {label:?}: mass {found}, expected {expected}")]
    MarginalMismatch {
        label: String,
        found: f64,
        expected: f64,
    },

    #[error("unknown base label {0:?}")]
    UnknownBaseLabel(String),

    #[error("measures do not share a base: {0}")]
    BaseMismatch(String),

    #[error("no chart entry for base atom {0}")]
    MissingChartEntry(usize),

    #[error("chart map for atom {atom} is not an isometry: {reason}")]
    NotAnIsometry { atom: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("transport problem with {entries} entries exceeds the cap of {cap}")]
    SizeCapExceeded { entries: usize, cap: usize },

    #[error("network simplex stalled after {0} pivots")]
    SolverStalled(usize),

    #[error("linear program failed: {0}")]
    LpFailure(String),

    #[error(
        "certificate inadmissible on fiber {fiber} at pair ({row}, {col}): excess {excess:e}"
    )]
    InadmissibleCertificate {
        fiber: usize,
        row: usize,
        col: usize,
        excess: f64,
    },

    #[error("zeta outside the dual ball: {0}")]
    InvalidZeta(String),

    #[error("constraint violated on fiber {fiber} at point {point}: residual {residual:e}")]
    ConstraintViolation {
        fiber: usize,
        point: usize,
        residual: f64,
    },

    #[error("geodesic interpolation is not available on {0} fibers for p > 1")]
    NonGeodesicFiberSpace(&'static str),

    #[error("unsupported fiber kind: {0}")]
    UnsupportedFiberKind(String),

    #[error("not converged: best objective {value}, duality gap bound {gap}")]
    NotConverged {
        value: f64,
        gap: f64,
        best: Box<crate::measure::FiberedMeasure>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
