use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("cannot factor zero")]
    FactorZero,
    #[error("factorisation budget exhausted; unfactored cofactor {cofactor}")]
    FactorizationTimeout { cofactor: BigInt },
    #[error("prime {0} is too large for word-sized finite field arithmetic")]
    PrimeTooLarge(BigInt),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("p-adic precision exhausted while separating roots of {factor}")]
    PrecisionExhausted { factor: String },
    #[error("roots require a wildly ramified extension (p = {p}, ramification {e})")]
    WildRamification { p: u64, e: u64 },
    #[error("extension degree {0} exceeds the supported bound")]
    ExtensionTooLarge(usize),
    #[error("{0}")]
    Invalid(String),
}
