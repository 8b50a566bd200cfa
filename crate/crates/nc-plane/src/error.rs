use thiserror::Error;

/// Crate-wide error type. Every variant maps to a stable machine-readable
/// `error_kind` string used by the CLI report layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("Hilbert function mismatch at degree {degree}: got {got}, expected {expected}")]
    HilbertMismatch {
        degree: usize,
        got: usize,
        expected: usize,
    },
    #[error("degree overflow: requested degree {requested} exceeds bound {bound}")]
    DegreeOverflow { requested: i64, bound: usize },
    #[error("no normal degree-3 element found: {0}")]
    NormalElementNotFound(String),
    #[error("degree bound too small: {0}")]
    DegreeBoundTooSmall(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("not a monad: {0}")]
    NotAMonad(String),
    #[error("KL-pair lies outside the complex locus: {0}")]
    NotInNLocus(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("chain identity violated: {0}")]
    IdentityViolated(String),
    #[error("the multilinearized relations have identically zero determinant")]
    IdenticallyZeroDeterminant,
    #[error("point is not on the point scheme: {0}")]
    NotOnPointScheme(String),
    #[error("points are not pairwise distinct")]
    PointsNotDistinct,
    #[error("right multiplication by g has a kernel: {0}")]
    GNotInjective(String),
    #[error("inconclusive certificate: {0}")]
    Inconclusive(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag for JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateParameters(_) => "degenerate_parameters",
            Error::HilbertMismatch { .. } => "hilbert_mismatch",
            Error::DegreeOverflow { .. } => "degree_overflow",
            Error::NormalElementNotFound(_) => "normal_element_not_found",
            Error::DegreeBoundTooSmall(_) => "degree_bound_too_small",
            Error::NotAComplex(_) => "not_a_complex",
            Error::NotAMonad(_) => "not_a_monad",
            Error::NotInNLocus(_) => "not_in_n_locus",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::IdentityViolated(_) => "identity_violated",
            Error::IdenticallyZeroDeterminant => "identically_zero_determinant",
            Error::NotOnPointScheme(_) => "not_on_point_scheme",
            Error::PointsNotDistinct => "points_not_distinct",
            Error::GNotInjective(_) => "g_not_injective",
            Error::Inconclusive(_) => "inconclusive",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
