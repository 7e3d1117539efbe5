//! Search for (tau')^r = A(x)*tau^j; a miss is only a statement about the bounds.

use schroder::cli::parse::parse_expression;
use schroder::detect::{transcendence_report, DetectionBounds};
use schroder::{solve_koenigs, validate_map};

fn main() -> schroder::Result<()> {
    let bounds = DetectionBounds::new(3, 3, 4, 48, 24)?;
    for src in ["z^3-6*z^2+9*z", "z^2+3*z"] {
        let map = validate_map(&parse_expression(src, 'z')?)?;
        let pair = solve_koenigs(&map, bounds.order)?;
        let report = transcendence_report(&pair, &bounds, 4)?;
        println!("{src}: {}", report.outcome.as_str());
        if let Some(eq) = &report.equation_tau {
            println!("  (tau')^{} = ({})*tau^{}", eq.r, eq.a, eq.j);
        }
        println!("  {}", report.conditional_statement);
    }
    Ok(())
}
