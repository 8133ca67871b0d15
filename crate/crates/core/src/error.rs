use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unbounded")]
    Unbounded,
    #[error("not full-dimensional")]
    NotFullDimensional,
    #[error("origin not interior")]
    OriginNotInterior,
    #[error("polytope is not generic")]
    NotGeneric,
    #[error("genericization failed after {0} attempts")]
    GenericizationFailed(usize),
    #[error("requires symmetric base")]
    RequiresSymmetricBase,
    #[error("not non-separable")]
    NotNonSeparable,
    #[error("family too large for the exact NS check ({0} members); use sampled NS check")]
    FamilyTooLarge(usize),
    #[error("LP failed: {0}")]
    Lp(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular lattice basis")]
    SingularBasis,
    #[error("enumeration bound exceeded: {0} vectors")]
    EnumerationOverflow(usize),
    #[error("bracket [{lower}, {upper}] wider than requested {requested}")]
    BracketTooWide { lower: f64, upper: f64, requested: f64 },
    #[error("no convergence within {iterations} iterations (best bracket [{lower}, {upper}])")]
    NoConvergence { iterations: usize, lower: f64, upper: f64 },
    #[error("index {index} out of range for {len} members")]
    IndexOutOfRange { index: usize, len: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
