//! Exact coefficient layer: rationals, dense polynomials and rational functions over ℚ.

pub mod poly;
pub mod ratfun;

pub use poly::Polynomial;
pub use ratfun::RationalFunction;
pub use rug::{Integer, Rational};

/// `a / b` as a canonical rational. Panics on `b = 0`.
pub fn rat(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

/// `q^n` for a nonnegative exponent.
pub fn pow_rational(q: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..n {
        acc *= q;
    }
    acc
}

/// Implements the owned/borrowed operator combinations by delegating to `&T op &T`.
#[macro_export]
#[doc(hidden)]
macro_rules! forward_binops {
    ($t:ty; $($tr:ident $m:ident),+) => {$(
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                std::ops::$tr::$m(&self, rhs)
            }
        }
        impl std::ops::$tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(self, &rhs)
            }
        }
    )+};
}
