//! Exact multivariate polynomials over ℚ.

mod matrix;
mod monomial;
mod parse;
mod polynomial;

pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use parse::{parse_in, parse_polynomial};
pub use polynomial::{format_rational, Polynomial, Ring};

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}
