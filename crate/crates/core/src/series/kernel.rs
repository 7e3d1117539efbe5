//! Truncated convolution of rational coefficient vectors.
//!
//! Long inputs go through Kronecker substitution: clear denominators, pack each
//! vector into one integer with a slot width wide enough for any product
//! coefficient, multiply once, and read the signed slots back. One big GMP
//! multiplication beats `len²` rational products with a gcd each.

use rug::{Integer, Rational};

const KRONECKER_MIN_LEN: usize = 8;

/// `c[i] = Σ_j a[j]·b[i−j]` for `i < len`.
pub fn convolve(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let a = trim(&a[..a.len().min(len)]);
    let b = trim(&b[..b.len().min(len)]);
    if a.len().min(b.len()) >= KRONECKER_MIN_LEN {
        kronecker(a, b, len)
    } else {
        schoolbook(a, b, len)
    }
}

fn trim(v: &[Rational]) -> &[Rational] {
    let end = v.iter().rposition(|c| *c != 0).map_or(0, |i| i + 1);
    &v[..end]
}

pub(crate) fn schoolbook(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut acc = Rational::new();
        let lo = i.saturating_sub(b.len().saturating_sub(1));
        let hi = i.min(a.len().saturating_sub(1));
        if !a.is_empty() && !b.is_empty() {
            for j in lo..=hi {
                if a[j] != 0 && b[i - j] != 0 {
                    acc += Rational::from(&a[j] * &b[i - j]);
                }
            }
        }
        out.push(acc);
    }
    out
}

/// Common denominator and the scaled integer numerators.
fn clear_denominators(v: &[Rational]) -> (Integer, Vec<Integer>) {
    let mut d = Integer::from(1);
    for c in v {
        if *c.denom() != 1 {
            d.lcm_mut(c.denom());
        }
    }
    let nums = v
        .iter()
        .map(|c| Integer::from(&d / c.denom()) * c.numer())
        .collect();
    (d, nums)
}

fn pack(v: &[Integer], width: u32) -> Integer {
    match v.len() {
        0 => Integer::new(),
        1 => v[0].clone(),
        n => {
            let mid = n / 2;
            let lo = pack(&v[..mid], width);
            let hi = pack(&v[mid..], width);
            (hi << (width * mid as u32)) + lo
        }
    }
}

/// Splits `x = Σ c_i·2^(width·i)` with `|c_i| < 2^(width−1)` into `count` slots.
fn unpack(x: Integer, width: u32, count: usize, out: &mut Vec<Integer>) {
    if count == 1 {
        out.push(x);
        return;
    }
    let mid = count / 2;
    let bits = width * mid as u32;
    let mut lo = Integer::from(x.keep_bits_ref(bits));
    if lo.get_bit(bits - 1) {
        lo -= Integer::from(1) << bits;
    }
    let hi = (x - &lo) >> bits;
    unpack(lo, width, mid, out);
    unpack(hi, width, count - mid, out);
}

pub(crate) fn kronecker(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let count = len.min(a.len() + b.len() - 1);
    let (da, na) = clear_denominators(a);
    let (db, nb) = clear_denominators(b);
    let bits = |v: &[Integer]| v.iter().map(Integer::significant_bits).max().unwrap_or(0);
    let terms = a.len().min(b.len()) as u64;
    let log_terms = 64 - terms.leading_zeros();
    let width = bits(&na) + bits(&nb) + log_terms + 2;

    let mut x = pack(&na, width) * pack(&nb, width);
    let total = width * count as u32;
    x.keep_bits_mut(total);
    if x.get_bit(total - 1) {
        x -= Integer::from(1) << total;
    }
    let mut slots = Vec::with_capacity(count);
    unpack(x, width, count, &mut slots);

    let d = da * db;
    let mut out: Vec<Rational> = slots
        .into_iter()
        .map(|c| Rational::from((c, d.clone())))
        .collect();
    out.resize(len, Rational::new());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rationals(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-1000i64..1000, 1i64..50), 0..max_len)
            .prop_map(|v| v.into_iter().map(|(n, d)| Rational::from((n, d))).collect())
    }

    #[test]
    fn kronecker_small_case() {
        let a: Vec<Rational> = [1, -2, 3].iter().map(|&c| Rational::from((c, 2))).collect();
        let b: Vec<Rational> = [-1, 0, 5].iter().map(|&c| Rational::from((c, 3))).collect();
        assert_eq!(kronecker(&a, &b, 7), schoolbook(&a, &b, 7));
    }

    #[test]
    fn wide_coefficients() {
        let big = Rational::from((Integer::from(1) << 4000u32, Integer::from(Integer::u_pow_u(3, 900))));
        let a = vec![big.clone(), -big.clone(), Rational::from((1, 7)), big.clone()];
        let b = vec![-big.clone(), Rational::from(1), big];
        assert_eq!(kronecker(&a, &b, 6), schoolbook(&a, &b, 6));
        assert_eq!(kronecker(&a, &b, 3), schoolbook(&a, &b, 3));
    }

    proptest! {
        #[test]
        fn routes_agree(a in rationals(30), b in rationals(30), len in 0usize..70) {
            let a = trim(&a[..a.len().min(len)]).to_vec();
            let b = trim(&b[..b.len().min(len)]).to_vec();
            prop_assume!(!a.is_empty() && !b.is_empty());
            prop_assert_eq!(kronecker(&a, &b, len), schoolbook(&a, &b, len));
        }
    }
}
