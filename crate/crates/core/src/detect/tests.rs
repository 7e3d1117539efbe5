use super::*;
use crate::cli::parse::parse_expression;
use crate::poincare::validate_map;
use proptest::prelude::*;

fn pair(src: &str, order: i64) -> SchroderPair {
    let m = validate_map(&parse_expression(src, 'z').unwrap()).unwrap();
    solve_koenigs(&m, order).unwrap()
}

fn rf(src: &str) -> RationalFunction {
    parse_expression(src, 'x').unwrap()
}

fn small_bounds() -> DetectionBounds {
    DetectionBounds::new(3, 3, 4, 40, 24).unwrap()
}

#[test]
fn bounds_validation() {
    let d = DetectionBounds::default();
    assert_eq!((d.r_max, d.j_max, d.deg_max, d.margin, d.order), (6, 8, 12, 64, 96));
    assert!(DetectionBounds::new(0, 1, 1, 100, 64).is_err());
    assert!(DetectionBounds::new(1, 1, 1, 100, 15).is_err());
    assert!(DetectionBounds::new(4, 6, 8, 85, 64).is_err());
    assert!(DetectionBounds::new(4, 6, 8, 86, 64).is_ok());
}

#[test]
fn grid_order() {
    let b = DetectionBounds::new(2, 2, 1, 40, 16).unwrap();
    assert_eq!(
        b.grid(),
        vec![(1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (2, 0), (2, 1), (2, -1), (2, 2), (2, -2)]
    );
}

#[test]
fn hit_exp() {
    let p = pair("z^2+2*z", 100);
    let rep = detect(&p, &DetectionBounds::default()).unwrap();
    assert_eq!(rep.outcome, Outcome::Hit);
    let eq = rep.equation_tau.unwrap();
    assert_eq!((eq.r, eq.j), (1, 0));
    assert_eq!(eq.a, rf("1/(1+x)"));
    assert_eq!(rep.grid_points, 1);
    assert_eq!(rep.residual_orders_checked, vec![99]);
    assert!(rep.conditional_statement.contains("equivalent"));
}

#[test]
fn hit_sin_squared() {
    let p = pair("4*z-4*z^2", 100);
    let rep = detect(&p, &DetectionBounds::default()).unwrap();
    let eq = rep.equation_tau.unwrap();
    assert_eq!((eq.r, eq.j), (2, 1));
    assert_eq!(eq.a, rf("1/(x-x^2)"));
    assert_eq!(eq.a.ord_at_zero().unwrap(), -1);
    let s = rep.equation_sigma.unwrap();
    assert_eq!((s.r, s.j), (-2, 1));
}

#[test]
fn hit_chebyshev() {
    let p = pair("z^3-6*z^2+9*z", 100);
    let rep = detect(&p, &DetectionBounds::default()).unwrap();
    let eq = rep.equation_tau.unwrap();
    assert_eq!((eq.r, eq.j), (2, 1));
    assert_eq!(eq.a, rf("4/(4*x-x^2)"));
}

#[test]
fn homography_short_circuits() {
    let p = pair("2*z/(3*z+1)", 100);
    let rep = detect(&p, &DetectionBounds::default()).unwrap();
    assert_eq!(rep.outcome, Outcome::Homography);
    assert_eq!(rep.closed_form, Some(rf("x/(3*x+1)")));
    assert!(rep.conditional_statement.contains("rational"));
    assert_eq!(rep.grid_points, 0);
}

#[test]
fn homography_still_verifies() {
    let p = pair("2*z/(z+1)", 30);
    let eq = RittEquationTau { r: 1, j: 0, a: rf("1/(1-x)^2") };
    assert!(verify_equation_tau(&p, &eq).unwrap().is_zero());
}

#[test]
fn no_hit_small_grid() {
    let p = pair("z^2+3*z", 40);
    let rep = detect(&p, &small_bounds()).unwrap();
    assert_eq!(rep.outcome, Outcome::NoHitWithinBounds);
    assert_eq!(rep.grid_points, small_bounds().grid().len());
    assert!(rep.equation_tau.is_none());
    assert!(rep.conditional_statement.contains("if and only if"));
    assert!(rep.conditional_statement.contains("never a proof"));
}

#[test]
fn pair_order_must_cover_bounds() {
    let p = pair("z^2+2*z", 30);
    assert!(matches!(detect(&p, &small_bounds()), Err(Error::Bounds(_))));
}

#[test]
fn threads_do_not_change_the_answer() {
    for src in ["z^2+2*z", "4*z-4*z^2", "z^2+3*z"] {
        let p = pair(src, 40);
        let one = detect(&p, &small_bounds()).unwrap();
        let many = detect_with_threads(&p, &small_bounds(), 4).unwrap();
        assert_eq!(one.outcome, many.outcome, "{src}");
        assert_eq!(one.equation_tau, many.equation_tau, "{src}");
        assert_eq!(one.grid_points, many.grid_points, "{src}");
    }
}

#[test]
fn perturbation_is_caught() {
    let p = pair("4*z-4*z^2", 40);
    let eq = RittEquationTau { r: 2, j: 1, a: rf("(1 + x^12)/(x-x^2)") };
    let r = verify_equation_tau(&p, &eq).unwrap();
    assert!(!r.is_zero());
    // x^12·A·τ has valuation 12.
    assert_eq!(r.first_nonzero.as_ref().unwrap().0, 12);
}

#[test]
fn structural_rejection() {
    let p = pair("4*z-4*z^2", 40);
    let eq = RittEquationTau { r: 2, j: 2, a: rf("1/(x-x^2)") };
    assert!(matches!(verify_equation_tau(&p, &eq), Err(Error::Check(_))));
}

#[test]
fn sigma_side() {
    let p = pair("z^2+2*z", 40);
    let s = to_sigma(&RittEquationTau { r: 1, j: 0, a: rf("1/(1+x)") });
    assert_eq!((s.r, s.j), (-1, 0));
    assert!(verify_equation_sigma(&p, &s).unwrap().is_zero());

    let p = pair("4*z-4*z^2", 40);
    let s = to_sigma(&RittEquationTau { r: 2, j: 1, a: rf("1/(x-x^2)") });
    assert!(verify_equation_sigma(&p, &s).unwrap().is_zero());
    // Same statement read as (σ')² = σ(1−σ)/t.
    let sigma = &p.sigma;
    let lhs = sigma.derive().pow(2).unwrap();
    let one_minus = sigma.scale(&Rational::from(-1)).add_scalar(&Rational::from(1));
    let rhs = (sigma * &one_minus).shift(-1);
    assert!((&lhs - &rhs).is_zero());
}

#[test]
fn scaling_coherence() {
    let p = pair("4*z-4*z^2", 40);
    let a = rf("1/(x-x^2)");
    let eq = RittEquationTau { r: 2, j: 1, a: a.clone() };
    let doubled = RittEquationTau { r: 4, j: 2, a: a.pow(2).unwrap() };
    assert!(verify_equation_tau(&p, &doubled).unwrap().is_zero());
    let s1 = to_sigma(&eq);
    let s2 = to_sigma(&doubled);
    assert_eq!((s2.r, s2.j, s2.a), (2 * s1.r, 2 * s1.j, s1.a.pow(2).unwrap()));
    assert!(verify_equation_sigma(&p, &to_sigma(&doubled)).unwrap().is_zero());
}

#[test]
fn transcendence_report_doubles_order() {
    let p = pair("z^2+2*z", 40);
    let rep = transcendence_report(&p, &small_bounds(), 1).unwrap();
    assert_eq!(rep.outcome, Outcome::Hit);
    assert_eq!(rep.residual_orders_checked, vec![39, 39, 79, 79]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn negative_control(c in prop::collection::vec((-5i64..=5, 1i64..=3), 2..4), d in prop::collection::vec((-5i64..=5, 1i64..=3), 1..3)) {
        // F = x·(1 + Σ c_i x^i)/(1 + Σ d_i x^i) has F(0) = 0, F'(0) = 1.
        let mut num = vec![Rational::new(), Rational::from(1)];
        num.extend(c.into_iter().map(|(a, b)| Rational::from((a, b))));
        let mut den = vec![Rational::from(1)];
        den.extend(d.into_iter().map(|(a, b)| Rational::from((a, b))));
        let f = RationalFunction::new(Polynomial::new(num), Polynomial::new(den)).unwrap();
        let mut fake = pair("4*z-4*z^2", 30);
        fake.tau = TruncatedSeries::expand_ratfun(&f, 30);
        for (r, j, a) in [(1, 0, "1/(1+x)"), (2, 1, "1/(x-x^2)"), (2, 1, "4/(4*x-x^2)")] {
            let eq = RittEquationTau { r, j, a: rf(a) };
            prop_assert!(!verify_equation_tau(&fake, &eq).unwrap().is_zero());
        }
    }
}
