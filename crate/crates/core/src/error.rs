use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// Property failures are not errors; they are reported as data by the
/// verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring spec `{0}`")]
    BadRingSpec(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),
    #[error("modulus polynomial {0} is reducible")]
    ReducibleModulus(String),
    #[error("no fixed modulus polynomial for gf({0})")]
    NoFixedModulus(u32),
    #[error("ring of size {0} exceeds the exhaustive bound of 512")]
    RingTooLarge(usize),
    #[error("cannot parse element literal `{0}`")]
    BadLiteral(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("map is not a ring automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("table is not a multiplicative automorphism: {0}")]
    NotMultiplicative(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("degree {0} exceeds the cap of {max}", max = crate::lie::MAX_DEGREE)]
    DegreeCap(usize),
    #[error("a field is required, got {0}")]
    NotAField(String),
    #[error("cannot parse Lie expression: {0}")]
    BadExpression(String),
    #[error("images {0} do not form a basis")]
    NotABasis(String),
    #[error("recovery failed: {0}")]
    Recovery(String),
    #[error("no decomposition found: {0}")]
    NoDecomposition(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
