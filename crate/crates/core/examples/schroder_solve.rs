//! Schröder and Koenigs functions of a polynomial map, with their certificates.

use schroder::cli::parse::parse_expression;
use schroder::{solve_koenigs, validate_map};

fn main() -> schroder::Result<()> {
    let src = std::env::args().nth(1).unwrap_or_else(|| "4*z-4*z^2".into());
    let map = validate_map(&parse_expression(&src, 'z')?)?;
    println!("R(z) = {}  q = {}", map.map.to_string_with('z'), map.q);

    let pair = solve_koenigs(&map, 10)?;
    println!("sigma = {}", pair.sigma);
    println!("tau   = {}", pair.tau);
    for r in &pair.residuals {
        println!("  {r}");
    }
    Ok(())
}
