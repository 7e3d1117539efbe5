//! Faà di Bruno linearization of the difference operator `Φ_R(y) = y∘R`.
//!
//! Differentiating `τ(R(x)) = q·τ(x)` `n` times gives
//! `Σ_k B_{n,k}(R', …, R^{(n−k+1)})·Φ_R(y_k) = q·y_n` with `y_k = τ^{(k)}`.
//! Solving that triangular system expresses each `Φ_R(y_n)` as
//! `q/(R')ⁿ·y_n + Σ_{k<n} A_{n,k}·y_k` with rational `A_{n,k}`.

pub mod bell;

use rug::Rational;

use crate::arith::RationalFunction;
use crate::error::{Error, Result};
use crate::poincare::{SchroderPair, ValidatedMap};
use crate::residual::Residual;
use crate::series::TruncatedSeries;

pub use bell::{bell, BellPolynomial};

/// Coefficients checked beyond the derivative order before a row check counts.
pub const MIN_CHECKABLE: i64 = 10;

pub const DEFAULT_MAX_N: usize = 6;

/// `n`-th derivative of `f∘g` as `Σ_k B_{n,k}(g', …)·(f^{(k)}∘g)`.
pub fn faa_di_bruno_apply(f: &TruncatedSeries, g: &TruncatedSeries, n: usize) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(Error::BellIndex { n, k: 0 });
    }
    let mut g_derivs = Vec::with_capacity(n);
    let mut d = g.clone();
    for _ in 0..n {
        d = d.derive();
        g_derivs.push(d.clone());
    }
    let mut f_deriv = f.clone();
    let mut acc: Option<TruncatedSeries> = None;
    for k in 1..=n {
        f_deriv = f_deriv.derive();
        let outer = f_deriv.compose(g)?;
        let term = &bell(n, k)?.eval_series(&g_derivs)? * &outer;
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    Ok(acc.expect("n ≥ 1"))
}

/// `Φ_R(y_n) = diagonal·y_n + Σ_{k=1}^{n−1} lower[k−1]·y_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedRow {
    pub n: usize,
    pub diagonal: RationalFunction,
    pub lower: Vec<RationalFunction>,
}

impl LinearizedRow {
    /// `A_{n,k}` for `1 ≤ k < n`.
    pub fn a(&self, k: usize) -> &RationalFunction {
        &self.lower[k - 1]
    }
}

/// Builds rows `1..=max_n` by elimination, reusing earlier rows.
#[derive(Clone, Debug)]
pub struct Linearizer {
    map: ValidatedMap,
    max_n: usize,
    /// `R', R'', …` as exact rational functions.
    derivs: Vec<RationalFunction>,
    rows: Vec<LinearizedRow>,
}

impl Linearizer {
    pub fn new(map: &ValidatedMap) -> Self {
        Self::with_max_n(map, DEFAULT_MAX_N)
    }

    pub fn with_max_n(map: &ValidatedMap, max_n: usize) -> Self {
        Linearizer {
            map: map.clone(),
            max_n,
            derivs: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn row(&mut self, n: usize) -> Result<&LinearizedRow> {
        if n == 0 || n > self.max_n {
            return Err(Error::RowIndex { n, max: self.max_n });
        }
        while self.derivs.len() < n {
            let next = match self.derivs.last() {
                None => self.map.map.derivative(),
                Some(d) => d.derivative(),
            };
            self.derivs.push(next);
        }
        while self.rows.len() < n {
            let row = self.next_row()?;
            self.rows.push(row);
        }
        Ok(&self.rows[n - 1])
    }

    fn next_row(&self) -> Result<LinearizedRow> {
        let n = self.rows.len() + 1;
        let q = RationalFunction::constant(self.map.q.clone());
        let inv_pow = self.derivs[0].pow(-(n as i64))?;
        let diagonal = &q * &inv_pow;
        let b: Vec<RationalFunction> = (1..=n)
            .map(|k| bell(n, k)?.eval_ratfun(&self.derivs))
            .collect::<Result<_>>()?;
        let mut lower = Vec::with_capacity(n - 1);
        for m in 1..n {
            // Coefficient of y_m in Σ_{k<n} B_{n,k}·Φ_R(y_k).
            let mut s = &b[m - 1] * &self.rows[m - 1].diagonal;
            for k in m + 1..n {
                s = &s + &(&b[k - 1] * self.rows[k - 1].a(m));
            }
            lower.push(-(&inv_pow * &s));
        }
        Ok(LinearizedRow { n, diagonal, lower })
    }
}

/// Row `n` on its own.
pub fn linearize_row(map: &ValidatedMap, n: usize) -> Result<LinearizedRow> {
    Linearizer::with_max_n(map, n.max(DEFAULT_MAX_N)).row(n).cloned()
}

fn tau_derivatives(tau: &TruncatedSeries, n: usize) -> Vec<TruncatedSeries> {
    let mut out = vec![tau.clone()];
    for k in 1..=n {
        let next = out[k - 1].derive();
        out.push(next);
    }
    out
}

fn require_checkable(pair: &SchroderPair, n: usize) -> Result<()> {
    let required = n as i64 + MIN_CHECKABLE;
    if pair.order < required {
        return Err(Error::InsufficientOrder {
            required,
            available: pair.order,
        });
    }
    Ok(())
}

/// `τ^{(n)}(R(x)) − diagonal·τ^{(n)}(x) − Σ_k A_{n,k}·τ^{(k)}(x)`.
#[allow(clippy::needless_range_loop)]
pub fn verify_row(row: &LinearizedRow, pair: &SchroderPair) -> Result<Residual> {
    require_checkable(pair, row.n)?;
    let ys = tau_derivatives(&pair.tau, row.n);
    let order = ys[row.n].order();
    let r = TruncatedSeries::expand_ratfun(&pair.map.map, order);
    let lhs = ys[row.n].compose(&r)?;
    let mut rhs = &TruncatedSeries::expand_ratfun(&row.diagonal, order) * &ys[row.n];
    for k in 1..row.n {
        rhs = &rhs + &(&TruncatedSeries::expand_ratfun(row.a(k), order) * &ys[k]);
    }
    Ok(Residual::of(format!("Phi_R(y_{0}) - row {0}", row.n), &(&lhs - &rhs)))
}

/// `ω_n = τ^{(n)}/z` with `z = (τ')ⁿ·τ^{1−n}`, and the shift `b·(R')ⁿ/(q·z)`.
#[derive(Clone, Debug)]
pub struct OmegaShift {
    pub n: usize,
    pub omega: TruncatedSeries,
    pub rhs: TruncatedSeries,
    /// `ω_n(R(x)) − ω_n(x) − rhs(x)`.
    pub residual: Residual,
}

#[allow(clippy::needless_range_loop)]
pub fn omega_shift(pair: &SchroderPair, n: usize) -> Result<OmegaShift> {
    if n < 2 {
        return Err(Error::RowIndex { n, max: DEFAULT_MAX_N.max(n) });
    }
    require_checkable(pair, n)?;
    let row = linearize_row(&pair.map, n)?;
    let ys = tau_derivatives(&pair.tau, n);
    let order = ys[n].order();
    let tau = ys[0].truncate(order);
    let z = &ys[1].pow(n as i64)? * &tau.pow(1 - n as i64)?;
    let z_inv = z.invert()?;
    let omega = &ys[n] * &z_inv;

    let mut b = TruncatedSeries::zero(order);
    for k in 1..n {
        b = &b + &(&TruncatedSeries::expand_ratfun(row.a(k), order) * &ys[k]);
    }
    let dr_pow = pair.map.map.derivative().pow(n as i64)?;
    let scaled = dr_pow.scale(&Rational::from(pair.map.q.recip_ref()));
    let rhs = &(&b * &TruncatedSeries::expand_ratfun(&scaled, order)) * &z_inv;

    let r = TruncatedSeries::expand_ratfun(&pair.map.map, order);
    let shifted = omega.compose(&r)?;
    let diff = &(&shifted - &omega) - &rhs;
    let residual = Residual::of(format!("omega_{n}(R) - omega_{n} - rhs"), &diff);
    Ok(OmegaShift { n, omega, rhs, residual })
}
