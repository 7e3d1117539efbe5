//! f(R(x)) = f(x) with f(0) = 0 forces f = 0: each step divides by q^n - 1.

use schroder::cli::parse::parse_expression;
use schroder::poincare::constants_check;
use schroder::validate_map;

fn main() -> schroder::Result<()> {
    let map = validate_map(&parse_expression("z/2 + z^2", 'z')?)?;
    let trace = constants_check(&map, 8)?;
    for s in &trace.steps {
        println!("n = {}: f_n*({}) = {}  =>  f_n = {}", s.n, s.factor, s.rhs, s.f_n);
    }
    println!("f = 0 below x^8: {}", trace.solution_is_zero());
    Ok(())
}
