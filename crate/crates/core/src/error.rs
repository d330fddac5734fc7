use thiserror::Error;

/// Errors raised by the library.
///
/// Domain errors (bad factorizations, non-isolated singularities, infinite
/// quotients) are distinguished from input errors (parse failures, shape
/// mismatches) so front ends can map them onto different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("variable index {index} out of range for a ring with {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("factorization `{label}` is invalid: {message}")]
    InvalidFactorization { label: String, message: String },

    #[error("potentials differ: `{left}` vs `{right}`")]
    PotentialMismatch { left: String, right: String },

    #[error("quotient is not finite-dimensional")]
    InfiniteDimensional,

    #[error("image generator {index} does not lie in the kernel submodule")]
    Containment { index: usize },

    #[error("singularity is not isolated: the Jacobian ideal has infinite colength")]
    NotIsolated,

    #[error("the Jacobian ideal has zeros away from the origin")]
    SingularAwayFromOrigin,

    #[error("potential does not vanish at the origin")]
    NonzeroAtOrigin,

    #[error("Hessian class vanishes in the Milnor algebra; residue cannot be normalized")]
    DegenerateHessian,

    #[error("{0}")]
    Parity(String),

    #[error("expected a form of degree {expected}, found degree {found}")]
    FormDegree { expected: usize, found: usize },

    #[error("operator is not nilpotent of the stated order: N^{power} != 0")]
    NotNilpotent { power: usize },

    #[error("{what} {value} out of range")]
    OutOfRange { what: &'static str, value: i64 },

    #[error("matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
