//! Truncated series: products, composition, reversion, rational expansion.

use schroder::cli::parse::parse_expression;
use schroder::TruncatedSeries;

fn main() -> schroder::Result<()> {
    let order = 8;
    // log(1 + x) from its derivative 1/(1 + x).
    let dlog = TruncatedSeries::expand_ratfun(&parse_expression("1/(1+x)", 'x')?, order);
    println!("1/(1+x) = {dlog}");

    let f = TruncatedSeries::from_ints(1, &[1, 1, 0, 0, 0, 0, 0]); // x + x^2
    let g = f.reversion()?;
    println!("reversion of x + x^2 = {g}");
    println!("check f(g(x)) = {}", f.compose(&g)?);

    let inv = TruncatedSeries::from_ints(0, &[1, -1, 0, 0, 0, 0, 0, 0]).invert()?;
    println!("1/(1 - x) = {inv}");
    println!("(1/(1 - x))^3 = {}", inv.pow(3)?);
    Ok(())
}
