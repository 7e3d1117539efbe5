//! Rational functions stay in lowest terms with a monic denominator.

use schroder::cli::parse::parse_expression;
use schroder::{Polynomial, RationalFunction};

fn main() -> schroder::Result<()> {
    let r = parse_expression("2*z/(3*z+1)", 'z')?;
    println!("R = {}", r.to_string_with('z'));
    println!("R' = {}", r.derivative().to_string_with('z'));

    // (x^2 - 1)/(x - 1) cancels to x + 1.
    let f = RationalFunction::new(Polynomial::from_ints(&[-1, 0, 1]), Polynomial::from_ints(&[-1, 1]))?;
    println!("(x^2 - 1)/(x - 1) = {f}");

    let a = parse_expression("1/(x-x^2)", 'x')?;
    println!("ord_0 of {a} is {}", a.ord_at_zero()?);
    println!("{a} squared = {}", a.pow(2)?);
    Ok(())
}
