//! Partial Bell polynomials `B_{n,k}(x_1, …, x_{n−k+1})` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Integer, Rational};

use crate::arith::RationalFunction;
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellPolynomial {
    pub n: usize,
    pub k: usize,
    /// Exponent vector `(e_1, …, e_{n−k+1})` to coefficient.
    pub terms: BTreeMap<Vec<u32>, Integer>,
}

/// `B_{n,k}` via `B_{n,k} = Σ_i C(n−1, i−1)·x_i·B_{n−i,k−1}`.
pub fn bell(n: usize, k: usize) -> Result<BellPolynomial> {
    if k < 1 || k > n {
        return Err(Error::BellIndex { n, k });
    }
    // table[m][j] = B_{m,j} over exponent vectors of length n.
    let mut table: Vec<Vec<BTreeMap<Vec<u32>, Integer>>> = vec![vec![BTreeMap::new(); k + 1]; n + 1];
    table[0][0].insert(vec![0; n], Integer::from(1));
    for m in 1..=n {
        for j in 1..=k.min(m) {
            let mut acc: BTreeMap<Vec<u32>, Integer> = BTreeMap::new();
            for i in 1..=m + 1 - j {
                let binom = Integer::from(Integer::binomial_u(m as u32 - 1, i as u32 - 1));
                for (e, c) in &table[m - i][j - 1] {
                    let mut e = e.clone();
                    e[i - 1] += 1;
                    *acc.entry(e).or_default() += Integer::from(&binom * c);
                }
            }
            table[m][j] = acc;
        }
    }
    let width = n - k + 1;
    let terms = std::mem::take(&mut table[n][k])
        .into_iter()
        .map(|(mut e, c)| {
            e.truncate(width);
            (e, c)
        })
        .collect();
    Ok(BellPolynomial { n, k, terms })
}

impl BellPolynomial {
    /// Number of variables, `n − k + 1`.
    pub fn width(&self) -> usize {
        self.n - self.k + 1
    }

    fn check_args(&self, got: usize) -> Result<()> {
        if got < self.width() {
            return Err(Error::BellIndex { n: self.n, k: self.k });
        }
        Ok(())
    }

    pub fn eval_rational(&self, args: &[Rational]) -> Result<Rational> {
        self.check_args(args.len())?;
        let mut acc = Rational::new();
        for (e, c) in &self.terms {
            let mut t = Rational::from(c);
            for (x, &p) in args.iter().zip(e) {
                t *= crate::arith::pow_rational(x, p);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_ratfun(&self, args: &[RationalFunction]) -> Result<RationalFunction> {
        self.check_args(args.len())?;
        let powers = power_table(args, self.k, RationalFunction::one(), |a, b| a * b);
        let mut acc = RationalFunction::zero();
        for (e, c) in &self.terms {
            let mut t = RationalFunction::constant(Rational::from(c));
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = &t * &powers[i][p as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub fn eval_series(&self, args: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        self.check_args(args.len())?;
        let order = args[..self.width()].iter().map(TruncatedSeries::order).min().unwrap_or(0);
        let powers = power_table(args, self.k, TruncatedSeries::one(order), |a, b| a * b);
        let mut acc = TruncatedSeries::zero(order);
        for (e, c) in &self.terms {
            let mut t = TruncatedSeries::one(order).scale(&Rational::from(c));
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = &t * &powers[i][p as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

/// `powers[i][p] = args[i]^p` for `p ≤ max`.
fn power_table<T: Clone>(args: &[T], max: usize, one: T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    args.iter()
        .map(|a| {
            let mut row = vec![one.clone()];
            for p in 1..=max {
                let next = mul(&row[p - 1], a);
                row.push(next);
            }
            row
        })
        .collect()
}

impl fmt::Display for BellPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 {
                factors.push(c.to_string());
            }
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, p)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// All set partitions of `{0..n}` as block-size multisets, by brute force.
    fn partition_oracle(n: usize, k: usize) -> BTreeMap<Vec<u32>, Integer> {
        fn go(i: usize, n: usize, blocks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == n {
                out.push(blocks.clone());
                return;
            }
            for b in 0..blocks.len() {
                blocks[b] += 1;
                go(i + 1, n, blocks, out);
                blocks[b] -= 1;
            }
            blocks.push(1);
            go(i + 1, n, blocks, out);
            blocks.pop();
        }
        let mut all = Vec::new();
        go(0, n, &mut Vec::new(), &mut all);
        let mut terms = BTreeMap::new();
        for blocks in all.into_iter().filter(|b| b.len() == k) {
            let mut e = vec![0u32; n - k + 1];
            for s in blocks {
                e[s - 1] += 1;
            }
            *terms.entry(e).or_insert_with(Integer::new) += 1;
        }
        terms
    }

    #[test]
    fn bell_4_2() {
        let b = bell(4, 2).unwrap();
        assert_eq!(b.to_string(), "3*x2^2 + 4*x1*x3");
        assert_eq!(b.terms, partition_oracle(4, 2));
    }

    #[test]
    fn edges() {
        for n in 1..=8 {
            let diag = bell(n, n).unwrap();
            assert_eq!(diag.terms.len(), 1);
            assert_eq!(diag.terms.get(&vec![n as u32]), Some(&Integer::from(1)));
            let single = bell(n, 1).unwrap();
            let mut e = vec![0; n];
            e[n - 1] = 1;
            assert_eq!(single.terms.len(), 1);
            assert_eq!(single.terms.get(&e), Some(&Integer::from(1)));
        }
    }

    #[test]
    fn index_errors() {
        assert_eq!(bell(3, 0).unwrap_err(), Error::BellIndex { n: 3, k: 0 });
        assert_eq!(bell(3, 4).unwrap_err(), Error::BellIndex { n: 3, k: 4 });
    }

    #[test]
    fn matches_partitions_up_to_seven() {
        for n in 1..=7 {
            for k in 1..=n {
                assert_eq!(bell(n, k).unwrap().terms, partition_oracle(n, k), "B({n},{k})");
            }
        }
    }

    #[test]
    fn bell_numbers() {
        let want = [1, 2, 5, 15, 52, 203, 877];
        for (n, w) in (1..=7).zip(want) {
            let ones = vec![Rational::from(1); n];
            let total: Rational = (1..=n).map(|k| bell(n, k).unwrap().eval_rational(&ones).unwrap()).sum();
            assert_eq!(total, w);
        }
    }

    #[test]
    fn homogeneity() {
        for n in 1..=9 {
            for k in 1..=n {
                for (e, c) in &bell(n, k).unwrap().terms {
                    assert!(*c > 0);
                    assert_eq!(e.iter().sum::<u32>() as usize, k);
                    let weight: usize = e.iter().enumerate().map(|(i, &p)| (i + 1) * p as usize).sum();
                    assert_eq!(weight, n);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn evaluations_agree(args in prop::collection::vec(-5i64..=5, 6), n in 1usize..=6, k in 1usize..=6) {
            prop_assume!(k <= n);
            let b = bell(n, k).unwrap();
            let rats: Vec<Rational> = args.iter().map(|&a| Rational::from(a)).collect();
            let consts: Vec<RationalFunction> = rats.iter().cloned().map(RationalFunction::constant).collect();
            let series: Vec<TruncatedSeries> = rats.iter().map(|a| TruncatedSeries::one(3).scale(a)).collect();
            let direct = b.eval_rational(&rats).unwrap();
            prop_assert_eq!(b.eval_ratfun(&consts).unwrap(), RationalFunction::constant(direct.clone()));
            prop_assert_eq!(b.eval_series(&series).unwrap().coeff(0), direct);
        }
    }
}
