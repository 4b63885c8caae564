use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ideal has no generators")]
    EmptyGeneratorList,

    #[error("generator {index}: coefficient is zero")]
    ZeroCoefficient { index: usize },

    #[error("generator {index}: monomial is constant (all exponents zero)")]
    ConstantMonomial { index: usize },

    #[error("generator {index}: negative exponent {exponent} at variable {variable}")]
    NegativeExponent {
        index: usize,
        variable: usize,
        exponent: i64,
    },

    #[error("{what}: expected {expected} entries, found {found}")]
    LengthMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("ideal must have at least one variable")]
    NoVariables,

    #[error("generator {index}: cannot parse coefficient {text:?}")]
    BadCoefficient { index: usize, text: String },

    #[error("operation requires a usual monomial ideal (all coefficients units)")]
    NotUsual,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus exponent K must be positive")]
    NonpositiveK,

    #[error("entry at ({row}, {col}) has negative {p}-adic valuation")]
    ValuationViolation { row: usize, col: usize, p: u64 },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("image of the incoming differential is not contained in the kernel at spot {spot}")]
    InconsistentImage { spot: usize },

    #[error("oracle did not stabilize below K = {cap} (max torsion exponent {max_exponent})")]
    NonStabilizing { cap: u32, max_exponent: u32 },

    #[error("block {block}: alpha {expected} at representative but {found} at degree {degree:?}")]
    BlockInconsistency {
        block: String,
        expected: usize,
        found: usize,
        degree: Vec<i64>,
    },

    #[error("coefficient has a prime factor that does not fit in 64 bits")]
    CoefficientTooLarge,

    #[error("malformed ideal JSON: {0}")]
    Json(String),
}
