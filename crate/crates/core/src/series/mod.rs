//! Truncated Laurent series over ℚ.
//!
//! A [`TruncatedSeries`] is known modulo `x^order`: every coefficient at an
//! exponent below `order` is exact, everything at or above it is unknown. All
//! operations return the order they can guarantee, and comparisons only look at
//! exponents below the smaller of the two orders.

mod kernel;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use crate::arith::{Polynomial, RationalFunction};
use crate::error::{Error, Result};

pub use kernel::convolve;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    valuation: i64,
    coeffs: Vec<Rational>,
    order: i64,
}

impl TruncatedSeries {
    /// `Σ coeffs[i]·x^(valuation+i) + O(x^(valuation+len))`, canonicalized.
    pub fn new(valuation: i64, coeffs: Vec<Rational>) -> Self {
        let order = valuation + coeffs.len() as i64;
        Self::canonical(valuation, coeffs, order)
    }

    /// Like [`new`](Self::new) but with an explicit order; coefficients past it
    /// are dropped and missing ones are zero.
    pub fn with_order(valuation: i64, mut coeffs: Vec<Rational>, order: i64) -> Self {
        let len = (order - valuation).max(0) as usize;
        coeffs.resize(len, Rational::new());
        Self::canonical(valuation, coeffs, order)
    }

    fn canonical(valuation: i64, mut coeffs: Vec<Rational>, order: i64) -> Self {
        debug_assert_eq!(valuation + coeffs.len() as i64, order.max(valuation));
        match coeffs.iter().position(|c| *c != 0) {
            None => Self::zero(order),
            Some(0) => TruncatedSeries {
                valuation,
                coeffs,
                order,
            },
            Some(k) => {
                coeffs.drain(..k);
                TruncatedSeries {
                    valuation: valuation + k as i64,
                    coeffs,
                    order,
                }
            }
        }
    }

    /// `O(x^order)`.
    pub fn zero(order: i64) -> Self {
        TruncatedSeries {
            valuation: order,
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(Rational::from(1), 0, order)
    }

    /// `x + O(x^order)`.
    pub fn x(order: i64) -> Self {
        Self::monomial(Rational::from(1), 1, order)
    }

    pub fn monomial(c: Rational, exponent: i64, order: i64) -> Self {
        if exponent >= order {
            return Self::zero(order);
        }
        let mut coeffs = vec![Rational::new(); (order - exponent) as usize];
        coeffs[0] = c;
        Self::canonical(exponent, coeffs, order)
    }

    pub fn from_polynomial(p: &Polynomial, order: i64) -> Self {
        if order <= 0 {
            return Self::zero(order);
        }
        let coeffs = (0..order as usize).map(|i| p.coeff(i)).collect();
        Self::canonical(0, coeffs, order)
    }

    pub fn from_ints(valuation: i64, coeffs: &[i64]) -> Self {
        Self::new(valuation, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Lowest exponent with a nonzero coefficient, or `order` for the zero series.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Number of known coefficients from the valuation up to the order.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^e`. Panics if `e` is at or past the order.
    pub fn coeff(&self, e: i64) -> Rational {
        assert!(e < self.order, "coefficient x^{e} is beyond order {}", self.order);
        if e < self.valuation {
            Rational::new()
        } else {
            self.coeffs[(e - self.valuation) as usize].clone()
        }
    }

    fn coeff_ref(&self, e: i64) -> Option<&Rational> {
        if e < self.valuation {
            None
        } else {
            self.coeffs.get((e - self.valuation) as usize)
        }
    }

    /// Coefficients for exponents `from..to` (zero-filled below the valuation).
    pub fn dense(&self, from: i64, to: i64) -> Vec<Rational> {
        assert!(to <= self.order);
        (from..to)
            .map(|e| self.coeff_ref(e).cloned().unwrap_or_default())
            .collect()
    }

    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order <= self.valuation {
            return Self::zero(order);
        }
        let keep = (order - self.valuation) as usize;
        TruncatedSeries {
            valuation: self.valuation,
            coeffs: self.coeffs[..keep].to_vec(),
            order,
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero(self.order);
        }
        TruncatedSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
            order: self.order,
        }
    }

    /// `f(c·x)`.
    pub fn rescale(&self, c: &Rational) -> Result<Self> {
        if *c == 0 {
            return Err(Error::Check("rescaling by zero".into()));
        }
        let mut factor = pow_i64(c, self.valuation)?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(Rational::from(a * &factor));
            factor *= c;
        }
        Ok(TruncatedSeries {
            valuation: self.valuation,
            coeffs,
            order: self.order,
        })
    }

    /// Adds the constant `c`.
    pub fn add_scalar(&self, c: &Rational) -> Self {
        if *c == 0 || self.order <= 0 {
            return self.clone();
        }
        let from = self.valuation.min(0);
        let mut dense = self.dense(from, self.order);
        dense[(-from) as usize] += c;
        Self::canonical(from, dense, self.order)
    }

    /// True when both series have the same coefficients below the smaller order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        let zero = Rational::new();
        (self.valuation.min(other.valuation)..order).all(|e| {
            self.coeff_ref(e).unwrap_or(&zero) == other.coeff_ref(e).unwrap_or(&zero)
        })
    }

    /// Product truncated to at most `cap` (the guaranteed order may be lower).
    pub fn mul_capped(&self, rhs: &Self, cap: i64) -> Self {
        let valuation = self.valuation + rhs.valuation;
        let order = (self.valuation + rhs.order)
            .min(rhs.valuation + self.order)
            .min(cap);
        if order <= valuation {
            return Self::zero(order);
        }
        let len = (order - valuation) as usize;
        let coeffs = convolve(&self.coeffs, &rhs.coeffs, len);
        Self::canonical(valuation, coeffs, order)
    }

    /// Multiplicative inverse; `valuation(1/f) = −valuation(f)`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvertZeroSeries);
        }
        let u = &self.coeffs;
        let u0_inv = Rational::from(u[0].recip_ref());
        let mut g: Vec<Rational> = Vec::with_capacity(u.len());
        g.push(u0_inv.clone());
        for n in 1..u.len() {
            let mut acc = Rational::new();
            for i in 1..=n {
                if u[i] != 0 {
                    acc += Rational::from(&u[i] * &g[n - i]);
                }
            }
            acc *= &u0_inv;
            g.push(-acc);
        }
        let len = g.len() as i64;
        Ok(Self::canonical(-self.valuation, g, -self.valuation + len))
    }

    /// Termwise derivative; the order drops by one.
    pub fn derive(&self) -> Self {
        let order = self.order - 1;
        if self.is_zero() {
            return Self::zero(order);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from(self.valuation + i as i64))
            .collect();
        Self::canonical(self.valuation - 1, coeffs, order)
    }

    /// Integer power. Keeps the relative precision of `self`.
    pub fn pow(&self, m: i64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::one(self.precision().max(1) as i64));
        }
        let base = if m < 0 { self.invert()? } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => &a * &sq,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = &sq * &sq;
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// `self ∘ g`. Needs `valuation(g) ≥ 1`; a Laurent `self` additionally needs `g ≠ 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.valuation < 1 {
            return Err(Error::CompositionValuation(g.valuation));
        }
        if self.valuation < 0 {
            if g.is_zero() {
                return Err(Error::InvertZeroSeries);
            }
            let taylor = self.shift(-self.valuation);
            return Ok(&g.pow(self.valuation)? * &taylor.compose(g)?);
        }
        let vg = g.valuation;
        // f = Σ_{e<N_f} f_e x^e + O(x^N_f) contributes O(g^N_f) = O(x^(N_f·v_g)).
        let cap = self.order.saturating_mul(vg);
        let mut acc = Self::zero(cap);
        if let Some(c0) = self.coeff_ref(0) {
            acc = acc.add_scalar(c0);
        }
        let last = self.valuation + self.coeffs.len() as i64 - 1;
        let mut power: Option<Self> = None;
        for e in 1..=last {
            if e.saturating_mul(vg) >= acc.order {
                break;
            }
            power = Some(match power {
                None => g.truncate(acc.order),
                Some(p) => p.mul_capped(g, acc.order),
            });
            if let Some(c) = self.coeff_ref(e).filter(|c| **c != 0) {
                let term = power.as_ref().expect("just set").scale(c);
                acc = &acc + &term;
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of a series `f₁x + f₂x² + …` with `f₁ ≠ 0`.
    pub fn reversion(&self) -> Result<Self> {
        if self.valuation != 1 {
            return Err(Error::NotReversible("valuation must be exactly 1"));
        }
        let n = self.order as usize;
        let f = self.dense(0, self.order);
        let f1 = &f[1];
        // s[m] accumulates Σ_k g_k [x^m] f^k over the powers processed so far;
        // [x^k] f^k = f₁^k fixes g_k.
        let mut s = vec![Rational::new(); n];
        let mut g = vec![Rational::new(); n];
        let mut power = f.clone();
        let mut f1_pow = f1.clone();
        for k in 1..n {
            let target = if k == 1 { Rational::from(1) } else { Rational::new() };
            g[k] = (target - &s[k]) / &f1_pow;
            if k + 1 == n {
                break;
            }
            if g[k] != 0 {
                for m in k + 1..n {
                    if power[m] != 0 {
                        s[m] += Rational::from(&g[k] * &power[m]);
                    }
                }
            }
            power = convolve(&power, &f, n);
            f1_pow *= f1;
        }
        Ok(Self::canonical(0, g, self.order).truncate(self.order))
    }

    /// Expansion of a rational function at 0, exact below `order`.
    pub fn expand_ratfun(f: &RationalFunction, order: i64) -> Self {
        if f.is_zero() {
            return Self::zero(order);
        }
        let vn = f.num().valuation().expect("nonzero");
        let vd = f.den().valuation().expect("nonzero");
        let valuation = vn as i64 - vd as i64;
        if order <= valuation {
            return Self::zero(order);
        }
        let len = (order - valuation) as usize;
        let num = f.num().shift_down(vn);
        let den = f.den().shift_down(vd);
        let d0_inv = Rational::from(den.coeffs()[0].recip_ref());
        let mut c: Vec<Rational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = num.coeff(k);
            for (i, d) in den.coeffs().iter().enumerate().skip(1).take(k) {
                if *d != 0 {
                    acc -= Rational::from(d * &c[k - i]);
                }
            }
            acc *= &d0_inv;
            c.push(acc);
        }
        Self::canonical(valuation, c, order)
    }

    /// `F(self)` for a rational function `F`, evaluated as `num(self) / den(self)`.
    pub fn apply_ratfun(&self, f: &RationalFunction) -> Result<Self> {
        let num = self.apply_poly(f.num());
        if f.is_polynomial() {
            let inv = Rational::from(f.den().coeffs()[0].recip_ref());
            return Ok(num.scale(&inv));
        }
        let den = self.apply_poly(f.den());
        Ok(&num * &den.invert()?)
    }

    /// `p(self)`. A constant `p` is reported to `self`'s order.
    pub fn apply_poly(&self, p: &Polynomial) -> Self {
        let mut acc = Self::zero(self.order.max(1));
        let mut power: Option<Self> = None;
        for k in 1..=p.degree().unwrap_or(0) {
            power = Some(match power {
                None => self.clone(),
                Some(pw) => &pw * self,
            });
            let c = &p.coeffs()[k];
            if *c != 0 {
                acc = &acc + &power.as_ref().expect("just set").scale(c);
            }
        }
        acc.add_scalar(&p.coeff(0))
    }
}

fn pow_i64(c: &Rational, e: i64) -> Result<Rational> {
    let base = if e < 0 {
        if *c == 0 {
            return Err(Error::Check("negative power of zero".into()));
        }
        Rational::from(c.recip_ref())
    } else {
        c.clone()
    };
    Ok(crate::arith::pow_rational(&base, e.unsigned_abs() as u32))
}

/// `c_v·var^v ± … + O(var^order)` from coefficient strings, zeros skipped.
pub(crate) fn render<S: AsRef<str>>(valuation: i64, coeffs: &[S], order: i64, var: char) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        let c = c.as_ref();
        if c == "0" {
            continue;
        }
        let (negative, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c),
        };
        let e = valuation + i as i64;
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        let term = match (mono.is_empty(), mag) {
            (true, _) => mag.to_string(),
            (false, "1") => mono,
            (false, _) => format!("{mag}*{mono}"),
        };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    if !out.is_empty() {
        out.push_str(" + ");
    }
    out.push_str(&format!("O({var}^{order})"));
    out
}

impl TruncatedSeries {
    pub fn to_string_with(&self, var: char) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        render(self.valuation, &coeffs, self.order, var)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with('x'))
    }
}

impl Add<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let valuation = self.valuation.min(rhs.valuation);
        if valuation >= order {
            return TruncatedSeries::zero(order);
        }
        let mut coeffs = self.dense(valuation, order);
        for (i, c) in coeffs.iter_mut().enumerate() {
            if let Some(r) = rhs.coeff_ref(valuation + i as i64) {
                *c += r;
            }
        }
        TruncatedSeries::canonical(valuation, coeffs, order)
    }
}

impl Sub<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Mul<&TruncatedSeries> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.mul_capped(rhs, i64::MAX)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
            order: self.order,
        }
    }
}

crate::forward_binops!(TruncatedSeries; Add add, Sub sub, Mul mul);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}
