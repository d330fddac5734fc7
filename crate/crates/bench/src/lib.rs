//! Fixtures shared by the benchmarks.

use mfres::poly::parse_in;
use mfres::{MatrixFactorization, PolyMatrix, Polynomial, Ring};

/// Parses a factorization from rows of polynomial strings.
pub fn factorization(vars: &[&str], f: &str, a: &[&[&str]], b: &[&[&str]]) -> MatrixFactorization {
    let ring = Ring::new(vars);
    let p = |s: &str| parse_in(&ring, s).expect("fixture parses");
    let m = |rows: &[&[&str]]| {
        PolyMatrix::from_rows(&ring, rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect())
            .expect("fixture matrix")
    };
    MatrixFactorization::new("bench", p(f), m(a), m(b)).expect("fixture is a factorization")
}

pub fn potential(vars: &[&str], f: &str) -> Polynomial {
    parse_in(&Ring::new(vars), f).expect("fixture parses")
}
