//! Exact symbolic computations for matrix factorizations of isolated
//! hypersurface singularities over ℚ.

pub mod error;
pub mod forms;
pub mod groebner;
pub mod hodge;
pub mod linalg;
pub mod mf;
pub mod order;
pub mod pairings;
pub mod poly;

pub use error::{Error, Result};
pub use mf::{MatrixFactorization, ModulePresentation, Over, TwoPeriodicComplex};
pub use order::MonomialOrder;
pub use poly::{parse_polynomial, Monomial, PolyMatrix, Polynomial, Rational, Ring};
