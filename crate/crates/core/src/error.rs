use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("power series constant term is not invertible")]
    ZeroConstantTerm,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("projection direction must be nonzero")]
    ZeroDirection,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone generators are linearly dependent")]
    DependentGenerators,
    #[error("tuple is degenerate: the vectors α_i·w_1 are linearly dependent")]
    DegenerateTuple,
    #[error("test function is not certified away from p = {0}")]
    NotAwayFromP(u64),
    #[error("enumeration of {count} points exceeds the guard {limit}")]
    UnboundedEnumeration { count: u128, limit: u128 },
    #[error("cone is not contained in the positive orthant of the norm structure")]
    NotInPositiveOrthant,
    #[error("special value has a nonzero irrational part")]
    IrrationalResidue,
    #[error("period scaling {0} is not a p-adic unit")]
    NonUnitScaling(String),
    #[error("measure criterion routes disagree (vanishing: {vanishing}, divisibility: {divisibility})")]
    RouteDisagreement { vanishing: bool, divisibility: bool },
    #[error("pseudo-measure has a pole: divisibility by T_{0} fails")]
    PoleDetected(usize),
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("exponent {0:?} lies outside the series caps")]
    OutOfCaps(Vec<u32>),
    #[error("auxiliary matrix does not move w_1 off the degenerate line")]
    BadAuxiliary,
    #[error("invalid smoothing data: {0}")]
    BadSmoothingData(String),
    #[error("ray class search exhausted after {0} candidates")]
    ClassSearchExhausted(usize),
    #[error("neither sign of the measure matches the exact value")]
    SignCalibrationFailure,
    #[error("cone decomposition failed verification: {0}")]
    VerificationFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
