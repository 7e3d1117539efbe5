//! Partial Bell polynomials and the rows they produce for y -> y(R(x)).

use schroder::cli::parse::parse_expression;
use schroder::linearized::{bell, verify_row, Linearizer};
use schroder::{solve_koenigs, validate_map};

fn main() -> schroder::Result<()> {
    for k in 1..=4 {
        println!("B(4,{k}) = {}", bell(4, k)?);
    }

    let map = validate_map(&parse_expression("z^2+2*z", 'z')?)?;
    let pair = solve_koenigs(&map, 24)?;
    let mut lin = Linearizer::new(&map);
    for n in 1..=3 {
        let row = lin.row(n)?.clone();
        println!("row {n}: diagonal {}", row.diagonal);
        for k in 1..n {
            println!("        A_{n},{k} = {}", row.a(k));
        }
        println!("        {}", verify_row(&row, &pair)?);
    }
    Ok(())
}
