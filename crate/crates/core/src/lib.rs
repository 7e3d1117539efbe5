//! Exact formal-series toolkit for Schröder and Koenigs equations of rational maps.

pub mod arith;
pub mod cli;
pub mod detect;
pub mod error;
pub mod linalg;
pub mod linearized;
pub mod poincare;
pub mod residual;
pub mod series;

pub use arith::{Integer, Polynomial, Rational, RationalFunction};
pub use error::{Error, Result};
pub use poincare::{solve_koenigs, solve_schroder, validate_map, SchroderPair, ValidatedMap};
pub use residual::Residual;
pub use series::TruncatedSeries;
