//! Exactness certificates for truncated identities.

use std::fmt;

use rug::Rational;
use crate::series::TruncatedSeries;

/// The difference of the two sides of an identity, known below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub label: String,
    pub order: i64,
    /// Lowest exponent with a nonzero coefficient, if any.
    pub first_nonzero: Option<(i64, Rational)>,
}

impl Residual {
    pub fn of(label: impl Into<String>, diff: &TruncatedSeries) -> Self {
        let first_nonzero = diff
            .leading()
            .map(|c| (diff.valuation(), c.clone()));
        Residual {
            label: label.into(),
            order: diff.order(),
            first_nonzero,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero.is_none()
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_nonzero {
            None => write!(f, "{}: 0 + O(x^{})", self.label, self.order),
            Some((e, c)) => write!(
                f,
                "{}: nonzero, leading {}*x^{} (checked to O(x^{}))",
                self.label, c, e, self.order
            ),
        }
    }
}
