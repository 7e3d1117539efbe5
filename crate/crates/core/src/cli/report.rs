//! Typed reports behind every subcommand, rendered as text or JSON.
//!
//! Rationals are written as exact `num/den` strings in lowest terms; series
//! carry their valuation and order next to the coefficient list.

use std::fmt::Write as _;

use rug::Rational;
use serde::Serialize;

use crate::arith::RationalFunction;
use crate::detect::{DetectionBounds, DetectionReport, RittEquationSigma, RittEquationTau};
use crate::linearized::{BellPolynomial, LinearizedRow};
use crate::poincare::{ConstantsTrace, SchroderPair, ValidatedMap};
use crate::residual::Residual;
use crate::series::TruncatedSeries;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeriesJson {
    pub valuation: i64,
    pub order: i64,
    /// Coefficients of `x^valuation .. x^(order−1)`.
    pub coefficients: Vec<String>,
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(s: &TruncatedSeries) -> Self {
        let valuation = if s.is_zero() { s.order() } else { s.valuation() };
        SeriesJson {
            valuation,
            order: s.order(),
            coefficients: s.coeffs().iter().map(Rational::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RatFunJson {
    pub num: String,
    pub den: String,
    pub expr: String,
}

impl RatFunJson {
    pub fn new(f: &RationalFunction, var: char) -> Self {
        RatFunJson {
            num: f.num().to_string_with(var),
            den: f.den().to_string_with(var),
            expr: f.to_string_with(var),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResidualJson {
    pub label: String,
    pub order: i64,
    pub zero: bool,
    /// `[exponent, coefficient]` of the lowest nonzero term.
    pub first_nonzero: Option<(i64, String)>,
}

impl From<&Residual> for ResidualJson {
    fn from(r: &Residual) -> Self {
        ResidualJson {
            label: r.label.clone(),
            order: r.order,
            zero: r.is_zero(),
            first_nonzero: r.first_nonzero.as_ref().map(|(e, c)| (*e, c.to_string())),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MapJson {
    pub expr: String,
    pub q: String,
    pub degree_num: usize,
    pub degree_den: usize,
    pub is_homography: bool,
    /// `|q| > 1`; recorded, not used.
    pub repelling: bool,
}

impl From<&ValidatedMap> for MapJson {
    fn from(m: &ValidatedMap) -> Self {
        MapJson {
            expr: m.map.to_string_with('z'),
            q: m.q.to_string(),
            degree_num: m.degree_info.0,
            degree_den: m.degree_info.1,
            is_homography: m.is_homography,
            repelling: m.repelling,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EquationJson {
    pub r: i64,
    pub j: i64,
    #[serde(rename = "A")]
    pub a: RatFunJson,
}

impl From<&RittEquationTau> for EquationJson {
    fn from(e: &RittEquationTau) -> Self {
        EquationJson { r: e.r, j: e.j, a: RatFunJson::new(&e.a, 'x') }
    }
}

impl From<&RittEquationSigma> for EquationJson {
    fn from(e: &RittEquationSigma) -> Self {
        EquationJson { r: e.r, j: e.j, a: RatFunJson::new(&e.a, 'x') }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub map: MapJson,
    pub sigma: SeriesJson,
    pub tau: SeriesJson,
    pub residuals: Vec<ResidualJson>,
    /// `σ` as a rational function, only for homographies.
    pub closed_form: Option<RatFunJson>,
}

impl SolveReport {
    pub fn new(pair: &SchroderPair, closed_form: Option<&RationalFunction>) -> Self {
        SolveReport {
            map: (&pair.map).into(),
            sigma: (&pair.sigma).into(),
            tau: (&pair.tau).into(),
            residuals: pair.residuals.iter().map(Into::into).collect(),
            closed_form: closed_form.map(|f| RatFunJson::new(f, 't')),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectJson {
    pub map: MapJson,
    pub outcome: &'static str,
    pub equation_tau: Option<EquationJson>,
    pub equation_sigma: Option<EquationJson>,
    pub bounds: DetectionBounds,
    pub residual_orders_checked: Vec<i64>,
    pub grid_points: usize,
    pub rejected_candidates: usize,
    pub closed_form: Option<RatFunJson>,
    pub conditional_statement: String,
}

impl DetectJson {
    pub fn new(map: &ValidatedMap, r: &DetectionReport) -> Self {
        DetectJson {
            map: map.into(),
            outcome: r.outcome.as_str(),
            equation_tau: r.equation_tau.as_ref().map(Into::into),
            equation_sigma: r.equation_sigma.as_ref().map(Into::into),
            bounds: r.bounds,
            residual_orders_checked: r.residual_orders_checked.clone(),
            grid_points: r.grid_points,
            rejected_candidates: r.rejected_candidates,
            closed_form: r.closed_form.as_ref().map(|f| RatFunJson::new(f, 't')),
            conditional_statement: r.conditional_statement.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyJson {
    pub map: MapJson,
    pub side: &'static str,
    pub equation: EquationJson,
    pub residual: ResidualJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialJson {
    pub coefficient: String,
    /// Exponents of `x_1, …, x_{n−k+1}`.
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BellJson {
    pub n: usize,
    pub k: usize,
    pub monomials: Vec<MonomialJson>,
    pub expr: String,
}

impl From<&BellPolynomial> for BellJson {
    fn from(b: &BellPolynomial) -> Self {
        BellJson {
            n: b.n,
            k: b.k,
            monomials: b
                .terms
                .iter()
                .map(|(e, c)| MonomialJson { coefficient: c.to_string(), exponents: e.clone() })
                .collect(),
            expr: b.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowJson {
    pub n: usize,
    pub diagonal: RatFunJson,
    /// `A_{n,1}, …, A_{n,n−1}`.
    pub lower: Vec<RatFunJson>,
}

impl From<&LinearizedRow> for RowJson {
    fn from(r: &LinearizedRow) -> Self {
        RowJson {
            n: r.n,
            diagonal: RatFunJson::new(&r.diagonal, 'x'),
            lower: r.lower.iter().map(|a| RatFunJson::new(a, 'x')).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearizeJson {
    pub map: MapJson,
    pub row: RowJson,
    pub residual: Option<ResidualJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ForcingJson {
    pub n: usize,
    pub factor: String,
    pub rhs: String,
    pub f_n: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsJson {
    pub map: MapJson,
    pub order: i64,
    pub factors: Vec<ForcingJson>,
    pub all_factors_nonzero: bool,
    pub solution_is_zero: bool,
}

impl ConstantsJson {
    pub fn new(map: &ValidatedMap, order: i64, t: &ConstantsTrace) -> Self {
        ConstantsJson {
            map: map.into(),
            order,
            factors: t
                .steps
                .iter()
                .map(|s| ForcingJson {
                    n: s.n,
                    factor: s.factor.to_string(),
                    rhs: s.rhs.to_string(),
                    f_n: s.f_n.to_string(),
                })
                .collect(),
            all_factors_nonzero: t.all_factors_nonzero(),
            solution_is_zero: t.solution_is_zero(),
        }
    }
}

/// One report per subcommand.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Solve(SolveReport),
    Detect(DetectJson),
    Verify(VerifyJson),
    Bell(BellJson),
    Linearize(LinearizeJson),
    Constants(ConstantsJson),
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: serde_json::Value,
    #[serde(flatten)]
    pub body: Body,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.body {
            Body::Solve(r) => solve_text(&mut out, r),
            Body::Detect(r) => detect_text(&mut out, r),
            Body::Verify(r) => verify_text(&mut out, r),
            Body::Bell(r) => {
                let _ = writeln!(out, "B({},{}) = {}", r.n, r.k, r.expr);
            }
            Body::Linearize(r) => linearize_text(&mut out, r),
            Body::Constants(r) => constants_text(&mut out, r),
        }
        out
    }
}

fn map_text(out: &mut String, m: &MapJson) {
    let _ = writeln!(out, "R(z) = {}", m.expr);
    let _ = writeln!(
        out,
        "q = {}  (degrees {}/{}, {}{})",
        m.q,
        m.degree_num,
        m.degree_den,
        if m.is_homography { "homography" } else { "not a homography" },
        if m.repelling { ", |q| > 1" } else { ", |q| < 1" },
    );
}

fn series_text(s: &SeriesJson, var: char) -> String {
    crate::series::render(s.valuation, &s.coefficients, s.order, var)
}

fn residual_text(out: &mut String, r: &ResidualJson) {
    match &r.first_nonzero {
        None => {
            let _ = writeln!(out, "residual {}: 0 + O(x^{})", r.label, r.order);
        }
        Some((e, c)) => {
            let _ = writeln!(
                out,
                "residual {}: NONZERO, leading {}*x^{} (checked to O(x^{}))",
                r.label, c, e, r.order
            );
        }
    }
}

fn solve_text(out: &mut String, r: &SolveReport) {
    map_text(out, &r.map);
    let _ = writeln!(out, "sigma(t) = {}", series_text(&r.sigma, 't'));
    let _ = writeln!(out, "tau(x) = {}", series_text(&r.tau, 'x'));
    if let Some(c) = &r.closed_form {
        let _ = writeln!(out, "closed form: sigma(t) = {}", c.expr);
    }
    for res in &r.residuals {
        residual_text(out, res);
    }
}

fn equation_text(e: &EquationJson, tau_side: bool) -> String {
    if tau_side {
        format!("(tau')^{} = A(x)*tau^{}  with A = {}", e.r, e.j, e.a.expr)
    } else {
        format!("(sigma')^{} = t^{}*A(sigma)  with A = {}", e.r, e.j, e.a.expr)
    }
}

fn detect_text(out: &mut String, r: &DetectJson) {
    map_text(out, &r.map);
    let _ = writeln!(out, "outcome: {}", r.outcome);
    if let Some(c) = &r.closed_form {
        let _ = writeln!(out, "closed form: sigma(t) = {}", c.expr);
    }
    if let Some(e) = &r.equation_tau {
        let _ = writeln!(out, "tau side: {}", equation_text(e, true));
    }
    if let Some(e) = &r.equation_sigma {
        let _ = writeln!(out, "sigma side: {}", equation_text(e, false));
    }
    let b = &r.bounds;
    let _ = writeln!(
        out,
        "bounds: r_max={} j_max={} deg_max={} order={} margin={}",
        b.r_max, b.j_max, b.deg_max, b.order, b.margin
    );
    let orders: Vec<String> = r.residual_orders_checked.iter().map(i64::to_string).collect();
    let _ = writeln!(out, "residual orders checked: {}", orders.join(", "));
    let _ = writeln!(
        out,
        "grid points searched: {} (rejected candidates: {})",
        r.grid_points, r.rejected_candidates
    );
    let _ = writeln!(out, "{}", r.conditional_statement);
}

fn verify_text(out: &mut String, r: &VerifyJson) {
    map_text(out, &r.map);
    let _ = writeln!(out, "{} side: {}", r.side, equation_text(&r.equation, r.side == "tau"));
    residual_text(out, &r.residual);
}

fn linearize_text(out: &mut String, r: &LinearizeJson) {
    map_text(out, &r.map);
    let n = r.row.n;
    let _ = writeln!(out, "Phi_R(y_{n}) = D*y_{n} + sum_k A_{n},k*y_k");
    let _ = writeln!(out, "D = {}", r.row.diagonal.expr);
    for (k, a) in r.row.lower.iter().enumerate() {
        let _ = writeln!(out, "A_{},{} = {}", n, k + 1, a.expr);
    }
    if let Some(res) = &r.residual {
        residual_text(out, res);
    }
}

fn constants_text(out: &mut String, r: &ConstantsJson) {
    map_text(out, &r.map);
    let _ = writeln!(out, "f(R(x)) = f(x), f(0) = 0, solved modulo x^{}:", r.order);
    for f in &r.factors {
        let _ = writeln!(out, "n = {}: f_n*({}) = {}  =>  f_n = {}", f.n, f.factor, f.rhs, f.f_n);
    }
    let _ = writeln!(out, "all forcing factors nonzero: {}", r.all_factors_nonzero);
    let _ = writeln!(out, "f = 0 modulo x^{}: {}", r.order, r.solution_is_zero);
}
