use rug::Rational;
use thiserror::Error;

use crate::cli::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd of zeros")]
    GcdOfZeros,

    #[error("division by the zero polynomial")]
    ZeroDenominator,

    #[error("valuation of zero")]
    ValuationOfZero,

    #[error("cannot invert zero series")]
    InvertZeroSeries,

    #[error("composition requires positive valuation (inner series has valuation {0})")]
    CompositionValuation(i64),

    #[error("not reversible: {0}")]
    NotReversible(&'static str),

    #[error("fixed point condition fails: R(0) = {0}")]
    FixedPoint(String),

    #[error("multiplier not admissible: q = {0}")]
    Multiplier(Rational),

    #[error("the map is not a homography")]
    NotHomography,

    #[error("bell polynomial index out of range: n = {n}, k = {k}")]
    BellIndex { n: usize, k: usize },

    #[error("row index {n} outside 1..={max}")]
    RowIndex { n: usize, max: usize },

    #[error("insufficient order: need at least {required}, have {available}")]
    InsufficientOrder { required: i64, available: i64 },

    #[error("inconsistent bounds: {0}")]
    Bounds(String),

    #[error("internal check failed: {0}")]
    Check(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
