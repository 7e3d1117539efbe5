//! Rational functions over ℚ in canonical form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Normalizes `num / den` to the coprime, monic-denominator representative.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Polynomial::gcd(&num, &den)?;
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc == 1 {
            return Ok(RationalFunction { num, den });
        }
        let inv = lc.recip();
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Quotient-rule derivative.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        Self::new(num, den).expect("square of a nonzero denominator")
    }

    /// Valuation at 0: `ord₀(num) − ord₀(den)`.
    pub fn ord_at_zero(&self) -> Result<i64> {
        let vn = self.num.valuation().ok_or(Error::ValuationOfZero)?;
        let vd = self.den.valuation().expect("nonzero denominator");
        Ok(vn as i64 - vd as i64)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn to_string_with(&self, var: char) -> String {
        if self.is_polynomial() {
            return self.num.to_string_with(var);
        }
        let num = self.num.to_string_with(var);
        let mut terms = self.num.coeffs().iter().filter(|c| **c != 0);
        let bare = terms.next().is_some_and(|c| *c.denom() == 1) && terms.next().is_none();
        if bare {
            format!("{num}/({})", self.den.to_string_with(var))
        } else {
            format!("({num})/({})", self.den.to_string_with(var))
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with('x'))
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

crate::forward_binops!(RationalFunction; Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}
