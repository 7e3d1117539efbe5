//! Schröder and Koenigs functions of a rational map with a fixed point at 0.
//!
//! For `R(0) = 0`, `R'(0) = q` with `q` not a root of unity, there is a unique
//! `σ = t + O(t²)` with `R(σ(t)) = σ(qt)`. Its compositional inverse `τ` solves
//! `τ(R(x)) = q·τ(x)`.

use rug::Rational;

use crate::arith::{pow_rational, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::residual::Residual;
use crate::series::TruncatedSeries;

/// A map that passed [`validate_map`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedMap {
    pub map: RationalFunction,
    /// `R'(0)`.
    pub q: Rational,
    /// `(deg num, deg den)`.
    pub degree_info: (usize, usize),
    pub is_homography: bool,
    /// `|q| > 1`. Metadata only; the formal theory does not depend on it.
    pub repelling: bool,
}

/// Checks `R(0) = 0` and that `q = R'(0)` is neither 0 nor a root of unity.
pub fn validate_map(map: &RationalFunction) -> Result<ValidatedMap> {
    let num = map.num();
    let den = map.den();
    let d0 = den.coeff(0);
    if d0 == 0 {
        return Err(Error::FixedPoint("∞".into()));
    }
    let n0 = num.coeff(0);
    if n0 != 0 {
        return Err(Error::FixedPoint(Rational::from(&n0 / &d0).to_string()));
    }
    let q = Rational::from(&num.coeff(1) / &d0);
    if q == 0 || q == 1 || q == -1 {
        return Err(Error::Multiplier(q));
    }
    let degree_info = (num.degree().unwrap_or(0), den.degree().unwrap_or(0));
    let repelling = Rational::from(q.abs_ref()) > 1;
    Ok(ValidatedMap {
        map: map.clone(),
        is_homography: degree_info.0 <= 1 && degree_info.1 <= 1,
        q,
        degree_info,
        repelling,
    })
}

fn require_order(order: i64) -> Result<()> {
    if order < 2 {
        return Err(Error::InsufficientOrder {
            required: 2,
            available: order,
        });
    }
    Ok(())
}

/// The normalized Schröder function `σ = t + …`, exact modulo `t^order`.
///
/// Works on `P(σ(t)) = σ(qt)·Q(σ(t))` for `R = P/Q`. The `tⁿ` coefficient is
/// linear in `σ_n` with slope `Q(0)(q − qⁿ)`; the powers `σ^k` are grown one
/// coefficient at a time, so `[tⁿ]σ^k` for `k ≥ 2` only involves `σ_1..σ_{n−1}`.
#[allow(clippy::needless_range_loop)]
pub fn solve_schroder(map: &ValidatedMap, order: i64) -> Result<TruncatedSeries> {
    require_order(order)?;
    let n_max = order as usize;
    let p = map.map.num();
    let den = map.map.den();
    let q = &map.q;
    let q0 = den.coeff(0);
    let kmax = map.degree_info.0.max(map.degree_info.1).max(1);

    let pivots: Vec<Rational> = (0..n_max)
        .map(|n| {
            let qn = pow_rational(q, n as u32);
            &q0 * (Rational::from(q - &qn))
        })
        .collect();

    // pw[k][n] = [tⁿ] σ^k, qs[n] = [tⁿ] Q(σ), q_pow[n] = qⁿ.
    let mut pw: Vec<Vec<Rational>> = vec![vec![Rational::new(); n_max]; kmax + 1];
    pw[0][0] = Rational::from(1);
    pw[1][1] = Rational::from(1);
    let mut qs = vec![Rational::new(); n_max];
    qs[0] = q0.clone();
    qs[1] = den.coeff(1);
    let q_pow: Vec<Rational> = (0..n_max).map(|n| pow_rational(q, n as u32)).collect();

    for n in 2..n_max {
        for k in 2..=kmax.min(n) {
            let mut acc = Rational::new();
            for i in 1..=n + 1 - k {
                if pw[1][i] != 0 && pw[k - 1][n - i] != 0 {
                    acc += Rational::from(&pw[1][i] * &pw[k - 1][n - i]);
                }
            }
            pw[k][n] = acc;
        }
        let mut known = Rational::new();
        for k in 2..=kmax.min(n) {
            let c = p.coeff(k);
            if c != 0 && pw[k][n] != 0 {
                known += Rational::from(&c * &pw[k][n]);
            }
        }
        for i in 1..n {
            if pw[1][i] != 0 && qs[n - i] != 0 {
                let t = Rational::from(&pw[1][i] * &qs[n - i]);
                known -= Rational::from(&t * &q_pow[i]);
            }
        }
        let pivot = &pivots[n];
        if *pivot == 0 {
            return Err(Error::Check(format!("vanishing pivot at n = {n}")));
        }
        let sigma_n = -(known / pivot);
        pw[1][n] = sigma_n;
        let mut qn = Rational::new();
        for k in 1..=kmax.min(n) {
            let c = den.coeff(k);
            if c != 0 && pw[k][n] != 0 {
                qn += Rational::from(&c * &pw[k][n]);
            }
        }
        qs[n] = qn;
    }
    let sigma = pw.swap_remove(1);
    Ok(TruncatedSeries::with_order(0, sigma, order))
}

/// Schröder function, Koenigs function and the map they belong to.
#[derive(Clone, Debug)]
pub struct SchroderPair {
    pub map: ValidatedMap,
    pub sigma: TruncatedSeries,
    pub tau: TruncatedSeries,
    pub order: i64,
    /// Schröder, Koenigs and round-trip residuals, all zero.
    pub residuals: Vec<Residual>,
}

/// `R(σ(t)) − σ(qt)`.
pub fn schroder_residual(map: &ValidatedMap, sigma: &TruncatedSeries) -> Result<Residual> {
    let lhs = sigma.apply_ratfun(&map.map)?;
    let rhs = sigma.rescale(&map.q)?;
    Ok(Residual::of("R(sigma(t)) - sigma(q*t)", &(&lhs - &rhs)))
}

/// `τ(R(x)) − q·τ(x)`.
pub fn koenigs_residual(map: &ValidatedMap, tau: &TruncatedSeries) -> Result<Residual> {
    let r = TruncatedSeries::expand_ratfun(&map.map, tau.order());
    let lhs = tau.compose(&r)?;
    Ok(Residual::of("tau(R(x)) - q*tau(x)", &(&lhs - &tau.scale(&map.q))))
}

/// `τ(σ(t)) − t`.
pub fn round_trip_residual(sigma: &TruncatedSeries, tau: &TruncatedSeries) -> Result<Residual> {
    let comp = tau.compose(sigma)?;
    Ok(Residual::of(
        "tau(sigma(t)) - t",
        &(&comp - &TruncatedSeries::x(comp.order())),
    ))
}

/// Solves for `σ`, reverts it to `τ`, and refuses to return unless all three
/// defining identities hold exactly below `order`.
pub fn solve_koenigs(map: &ValidatedMap, order: i64) -> Result<SchroderPair> {
    let sigma = solve_schroder(map, order)?;
    let tau = sigma.reversion()?;
    let residuals = vec![
        schroder_residual(map, &sigma)?,
        koenigs_residual(map, &tau)?,
        round_trip_residual(&sigma, &tau)?,
    ];
    for r in &residuals {
        if !r.is_zero() || r.order < order {
            return Err(Error::Check(r.to_string()));
        }
    }
    Ok(SchroderPair {
        map: map.clone(),
        sigma,
        tau,
        order,
        residuals,
    })
}

/// `(q, a)` with `R = qz/(az + 1)`.
fn homography_params(map: &ValidatedMap) -> Result<(Rational, Rational)> {
    if !map.is_homography {
        return Err(Error::NotHomography);
    }
    let den = map.map.den();
    let a = Rational::from(&den.coeff(1) / &den.coeff(0));
    Ok((map.q.clone(), a))
}

/// `σ = (q−1)t / (at + (q−1))` for `R = qz/(az+1)`.
pub fn homography_closed_form(map: &ValidatedMap) -> Result<RationalFunction> {
    let (q, a) = homography_params(map)?;
    let qm1 = Rational::from(&q - 1);
    RationalFunction::new(
        Polynomial::new(vec![Rational::new(), qm1.clone()]),
        Polynomial::new(vec![qm1, a]),
    )
}

/// `τ = (q−1)x / (−ax + (q−1))`, the inverse of [`homography_closed_form`].
pub fn homography_koenigs(map: &ValidatedMap) -> Result<RationalFunction> {
    let (q, a) = homography_params(map)?;
    let qm1 = Rational::from(&q - 1);
    RationalFunction::new(
        Polynomial::new(vec![Rational::new(), qm1.clone()]),
        Polynomial::new(vec![qm1, -a]),
    )
}

/// One step of the constants argument: `f_n·(qⁿ − 1) = rhs_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingStep {
    pub n: usize,
    pub factor: Rational,
    /// `−Σ_{k<n} f_k·[xⁿ]R^k`; zero whenever all earlier `f_k` are.
    pub rhs: Rational,
    pub f_n: Rational,
}

#[derive(Clone, Debug)]
pub struct ConstantsTrace {
    pub steps: Vec<ForcingStep>,
    /// The solution of `f(R) = f`, `f(0) = 0`, modulo `x^order`.
    pub solution: TruncatedSeries,
}

impl ConstantsTrace {
    pub fn all_factors_nonzero(&self) -> bool {
        self.steps.iter().all(|s| s.factor != 0)
    }

    pub fn solution_is_zero(&self) -> bool {
        self.solution.is_zero()
    }
}

/// Solves `f(R(x)) = f(x)`, `f(0) = 0` coefficient by coefficient.
///
/// `[xⁿ]R^n = qⁿ`, so `f_n` is pinned by `qⁿ − 1`, which never vanishes for an
/// admissible `q`; the only solution is `f = 0`.
pub fn constants_check(map: &ValidatedMap, order: i64) -> Result<ConstantsTrace> {
    require_order(order)?;
    let r = TruncatedSeries::expand_ratfun(&map.map, order);
    let n_max = order as usize;
    let mut powers: Vec<TruncatedSeries> = vec![TruncatedSeries::one(order), r.clone()];
    for k in 2..n_max {
        let next = powers[k - 1].mul_capped(&r, order);
        powers.push(next);
    }
    let mut f = vec![Rational::new(); n_max];
    let mut steps = Vec::with_capacity(n_max - 1);
    for n in 1..n_max {
        let mut rhs = Rational::new();
        for k in 1..n {
            if f[k] != 0 {
                rhs -= Rational::from(&f[k] * &powers[k].coeff(n as i64));
            }
        }
        let factor = pow_rational(&map.q, n as u32) - 1u32;
        if factor == 0 {
            return Err(Error::Check(format!("forcing factor vanishes at n = {n}")));
        }
        let f_n = Rational::from(&rhs / &factor);
        f[n] = f_n.clone();
        steps.push(ForcingStep { n, factor, rhs, f_n });
    }
    Ok(ConstantsTrace {
        steps,
        solution: TruncatedSeries::with_order(0, f, order),
    })
}

#[cfg(test)]
mod tests;
