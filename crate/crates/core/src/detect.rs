//! Bounded search for `(τ')^r = A(x)·τ^j` with `A` rational.
//!
//! For each grid point the series `x^j·(τ')^r·τ^{−j}` is fed to a Padé solve of
//! size `deg_max`; a consistent system yields a candidate `A`, which only counts
//! once the identity holds at the full order of the pair.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rug::Rational;
use serde::Serialize;

use crate::arith::{Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poincare::{homography_closed_form, solve_koenigs, SchroderPair};
use crate::residual::Residual;
use crate::series::TruncatedSeries;

/// Coefficients that must survive in a residual for it to mean anything.
pub const MIN_CHECKABLE: i64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DetectionBounds {
    pub r_max: u32,
    pub j_max: u32,
    pub deg_max: u32,
    pub order: i64,
    pub margin: u32,
}

impl Default for DetectionBounds {
    fn default() -> Self {
        Self::with_search(6, 8, 12).expect("default bounds are consistent")
    }
}

impl DetectionBounds {
    pub const DEFAULT_MARGIN: u32 = 64;
    pub const MIN_MARGIN: u32 = 16;

    /// Bounds with the default margin and the smallest admissible order.
    pub fn with_search(r_max: u32, j_max: u32, deg_max: u32) -> Result<Self> {
        let margin = Self::DEFAULT_MARGIN;
        let order = Self::min_order(j_max, deg_max, margin);
        Self::new(r_max, j_max, deg_max, order, margin)
    }

    pub fn min_order(j_max: u32, deg_max: u32, margin: u32) -> i64 {
        2 * deg_max as i64 + j_max as i64 + margin as i64
    }

    pub fn new(r_max: u32, j_max: u32, deg_max: u32, order: i64, margin: u32) -> Result<Self> {
        if r_max < 1 {
            return Err(Error::Bounds("r_max must be at least 1".into()));
        }
        if margin < Self::MIN_MARGIN {
            return Err(Error::Bounds(format!("margin {margin} is below {}", Self::MIN_MARGIN)));
        }
        let need = Self::min_order(j_max, deg_max, margin);
        if order < need {
            return Err(Error::Bounds(format!(
                "order {order} is below 2*deg_max + j_max + margin = {need}"
            )));
        }
        Ok(DetectionBounds { r_max, j_max, deg_max, order, margin })
    }

    /// Length of the congruence `p − d·S ≡ 0 mod x^M`.
    pub fn pade_order(&self) -> usize {
        2 * self.deg_max as usize + self.margin as usize
    }

    /// `(r, j)` in search order: increasing `r`, then `j = 0, 1, −1, 2, −2, …`.
    pub fn grid(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for r in 1..=self.r_max as i64 {
            out.push((r, 0));
            for a in 1..=self.j_max as i64 {
                out.push((r, a));
                out.push((r, -a));
            }
        }
        out
    }
}

/// `(τ')^r = A(x)·τ^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RittEquationTau {
    pub r: i64,
    pub j: i64,
    pub a: RationalFunction,
}

/// `(σ')^r = t^j·A(σ)`, stored in the orientation produced by [`to_sigma`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RittEquationSigma {
    pub r: i64,
    pub j: i64,
    pub a: RationalFunction,
}

/// `(τ')^r = A·τ^j` becomes `(σ')^{−r} = t^j·A(σ)` under `x = σ(t)`.
pub fn to_sigma(eq: &RittEquationTau) -> RittEquationSigma {
    RittEquationSigma {
        r: -eq.r,
        j: eq.j,
        a: eq.a.clone(),
    }
}

fn structural_check(a: &RationalFunction, j: i64) -> Result<()> {
    let ord = a.ord_at_zero()?;
    if ord != -j {
        return Err(Error::Check(format!("ord_0 A = {ord} but -j = {}", -j)));
    }
    Ok(())
}

fn require_order(pair: &SchroderPair) -> Result<()> {
    let required = MIN_CHECKABLE + 1;
    if pair.order < required {
        return Err(Error::InsufficientOrder {
            required,
            available: pair.order,
        });
    }
    Ok(())
}

/// `A·x^j`, regular and nonzero at 0 once `ord₀A = −j`.
fn unit_part(a: &RationalFunction, j: i64) -> Result<RationalFunction> {
    let xj = RationalFunction::x().pow(j)?;
    Ok(a * &xj)
}

/// `(τ')^r − A·τ^j`, after checking `ord₀A = −j`.
pub fn verify_equation_tau(pair: &SchroderPair, eq: &RittEquationTau) -> Result<Residual> {
    structural_check(&eq.a, eq.j)?;
    require_order(pair)?;
    tau_residual(&pair.tau, eq)
}

fn tau_residual(tau: &TruncatedSeries, eq: &RittEquationTau) -> Result<Residual> {
    // τ^j = x^j·(τ/x)^j and A·x^j = Â, so A·τ^j = Â·(τ/x)^j has valuation 0.
    let dtau = tau.derive();
    let order = dtau.order();
    let u = tau.shift(-1).truncate(order);
    let lhs = dtau.pow(eq.r)?;
    let a_hat = TruncatedSeries::expand_ratfun(&unit_part(&eq.a, eq.j)?, order);
    let rhs = &a_hat * &u.pow(eq.j)?;
    Ok(Residual::of(
        format!("(tau')^{} - A*tau^{}", eq.r, eq.j),
        &(&lhs - &rhs),
    ))
}

/// `(σ')^r − t^j·A(σ)`, with `t^j·A(σ) = (σ/t)^{−j}·Â(σ)`.
pub fn verify_equation_sigma(pair: &SchroderPair, eq: &RittEquationSigma) -> Result<Residual> {
    structural_check(&eq.a, eq.j)?;
    require_order(pair)?;
    let sigma = &pair.sigma;
    let dsigma = sigma.derive();
    let order = dsigma.order();
    let u = sigma.shift(-1).truncate(order);
    let lhs = dsigma.pow(eq.r)?;
    let a_hat = sigma.truncate(order).apply_ratfun(&unit_part(&eq.a, eq.j)?)?;
    let rhs = &u.pow(-eq.j)? * &a_hat;
    Ok(Residual::of(
        format!("(sigma')^{} - t^{}*A(sigma)", eq.r, eq.j),
        &(&lhs - &rhs),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Homography,
    Hit,
    NoHitWithinBounds,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Homography => "homography",
            Outcome::Hit => "hit",
            Outcome::NoHitWithinBounds => "no_hit_within_bounds",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DetectionReport {
    pub outcome: Outcome,
    pub equation_tau: Option<RittEquationTau>,
    pub equation_sigma: Option<RittEquationSigma>,
    pub bounds: DetectionBounds,
    /// Orders at which the reported equations were confirmed, or the Padé
    /// order at which every grid point failed.
    pub residual_orders_checked: Vec<i64>,
    pub conditional_statement: String,
    pub grid_points: usize,
    /// Grid points whose Padé system was consistent but whose candidate failed
    /// the structural or full-order check.
    pub rejected_candidates: usize,
    /// `σ` in closed form for a homography.
    pub closed_form: Option<RationalFunction>,
}

enum PointResult {
    Inconsistent,
    Rejected,
    Hit(RittEquationTau, i64),
}

/// Shared per-pair data for the grid.
struct Search<'a> {
    pair: &'a SchroderPair,
    m: usize,
    deg: usize,
    /// `τ'` and `τ/x`, truncated to the Padé order.
    dtau: TruncatedSeries,
    u: TruncatedSeries,
}

impl Search<'_> {
    fn point(&self, r: i64, j: i64) -> Result<PointResult> {
        // x^j·(τ')^r·τ^{−j} = (τ')^r·(τ/x)^{−j}
        let s = &self.dtau.pow(r)? * &self.u.pow(-j)?;
        let coeffs = s.dense(0, self.m as i64);
        let d = self.deg;
        // Rows m = D+1 .. M−1 of p − d·S: Σ_i d_i·S_{m−i} = 0.
        let rows = (d + 1..self.m)
            .map(|row| (0..=d).map(|i| coeffs[row - i].clone()).collect())
            .collect();
        let kernel = Matrix::from_rows(rows).kernel();
        let Some(dv) = kernel.into_iter().next() else {
            return Ok(PointResult::Inconsistent);
        };
        let p: Vec<Rational> = (0..=d)
            .map(|row| {
                let mut acc = Rational::new();
                for i in 0..=row {
                    acc += Rational::from(&dv[i] * &coeffs[row - i]);
                }
                acc
            })
            .collect();
        let p = Polynomial::new(p);
        let den = Polynomial::new(dv);
        if p.is_zero() {
            return Ok(PointResult::Rejected);
        }
        let xj = RationalFunction::x().pow(j)?;
        let a = RationalFunction::new(p, den)?.checked_div(&xj)?;
        let eq = RittEquationTau { r, j, a };
        if structural_check(&eq.a, j).is_err() {
            return Ok(PointResult::Rejected);
        }
        let residual = tau_residual(&self.pair.tau, &eq)?;
        Ok(if residual.is_zero() {
            PointResult::Hit(eq, residual.order)
        } else {
            PointResult::Rejected
        })
    }
}

fn no_hit_statement(b: &DetectionBounds) -> String {
    format!(
        "No equation (tau')^r = A(x)*tau^j with 1 <= r <= {}, |j| <= {}, deg num A, deg den A <= {} \
         is consistent to order {}. The Schroeder function sigma is differentially algebraic over Q(t) \
         if and only if it satisfies SOME Ritt type (A) equation (sigma')^r = t^j*A(sigma). \
         This search refutes only the finite grid above, so the outcome is evidence of differential \
         transcendence, never a proof.",
        b.r_max,
        b.j_max,
        b.deg_max,
        b.pade_order()
    )
}

fn hit_statement(eq: &RittEquationTau) -> String {
    format!(
        "tau satisfies (tau')^{r} = A(x)*tau^{j}, so sigma satisfies the Ritt type (A) equation \
         (sigma')^{nr} = t^{j}*A(sigma). Differential algebraicity of sigma over Q(t) is equivalent to \
         the existence of such an equation, so sigma is differentially algebraic.",
        r = eq.r,
        j = eq.j,
        nr = -eq.r,
    )
}

fn homography_statement(closed: &RationalFunction) -> String {
    format!(
        "R is a homography, so the Schroeder function is rational: sigma(t) = {}. \
         A rational sigma is differentially algebraic; the transcendence search does not apply.",
        closed.to_string_with('t')
    )
}

/// Sequential search; see [`detect_with_threads`].
pub fn detect(pair: &SchroderPair, bounds: &DetectionBounds) -> Result<DetectionReport> {
    detect_with_threads(pair, bounds, 1)
}

/// Runs the grid on up to `threads` workers. The reported hit is the first one
/// in grid order regardless of which worker finds what first.
pub fn detect_with_threads(
    pair: &SchroderPair,
    bounds: &DetectionBounds,
    threads: usize,
) -> Result<DetectionReport> {
    if pair.order < bounds.order {
        return Err(Error::Bounds(format!(
            "pair order {} is below the bound order {}",
            pair.order, bounds.order
        )));
    }
    let mut report = DetectionReport {
        outcome: Outcome::NoHitWithinBounds,
        equation_tau: None,
        equation_sigma: None,
        bounds: *bounds,
        residual_orders_checked: Vec::new(),
        conditional_statement: String::new(),
        grid_points: 0,
        rejected_candidates: 0,
        closed_form: None,
    };
    if pair.map.is_homography {
        let closed = homography_closed_form(&pair.map)?;
        report.outcome = Outcome::Homography;
        report.conditional_statement = homography_statement(&closed);
        report.closed_form = Some(closed);
        return Ok(report);
    }

    let m = bounds.pade_order();
    let available = pair.order - 1;
    if (m as i64) > available {
        return Err(Error::InsufficientOrder {
            required: m as i64 + 1,
            available: pair.order,
        });
    }
    let tau = pair.tau.truncate(m as i64 + 1);
    let search = Search {
        pair,
        m,
        deg: bounds.deg_max as usize,
        dtau: tau.derive(),
        u: tau.shift(-1).truncate(m as i64),
    };
    let grid = bounds.grid();
    let results: Vec<Mutex<Option<Result<PointResult>>>> = grid.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let first_hit = AtomicUsize::new(usize::MAX);
    let work = || loop {
        let idx = next.fetch_add(1, Ordering::SeqCst);
        if idx >= grid.len() || idx > first_hit.load(Ordering::SeqCst) {
            break;
        }
        let (r, j) = grid[idx];
        let res = search.point(r, j);
        if matches!(res, Ok(PointResult::Hit(..)) | Err(_)) {
            first_hit.fetch_min(idx, Ordering::SeqCst);
        }
        *results[idx].lock().expect("unpoisoned") = Some(res);
    };
    let threads = threads.max(1).min(grid.len().max(1));
    if threads == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(work);
            }
        });
    }

    for cell in results {
        let Some(res) = cell.into_inner().expect("unpoisoned") else {
            break;
        };
        report.grid_points += 1;
        match res? {
            PointResult::Inconsistent => {}
            PointResult::Rejected => report.rejected_candidates += 1,
            PointResult::Hit(eq, order) => {
                report.outcome = Outcome::Hit;
                report.residual_orders_checked.push(order);
                report.conditional_statement = hit_statement(&eq);
                report.equation_sigma = Some(to_sigma(&eq));
                report.equation_tau = Some(eq);
                return Ok(report);
            }
        }
    }
    report.residual_orders_checked.push(m as i64);
    report.conditional_statement = no_hit_statement(bounds);
    Ok(report)
}

/// [`detect`], plus: a hit is re-checked on both sides against a pair solved
/// at twice the order.
pub fn transcendence_report(pair: &SchroderPair, bounds: &DetectionBounds, threads: usize) -> Result<DetectionReport> {
    let mut report = detect_with_threads(pair, bounds, threads)?;
    if report.outcome != Outcome::Hit {
        return Ok(report);
    }
    let eq_tau = report.equation_tau.as_ref().expect("hit carries an equation");
    let eq_sigma = report.equation_sigma.as_ref().expect("hit carries an equation");
    let sigma_here = verify_equation_sigma(pair, eq_sigma)?;
    let doubled = solve_koenigs(&pair.map, 2 * pair.order)?;
    let tau_twice = verify_equation_tau(&doubled, eq_tau)?;
    let sigma_twice = verify_equation_sigma(&doubled, eq_sigma)?;
    for r in [&sigma_here, &tau_twice, &sigma_twice] {
        if !r.is_zero() {
            return Err(Error::Check(format!("hit failed re-verification: {r}")));
        }
        report.residual_orders_checked.push(r.order);
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
