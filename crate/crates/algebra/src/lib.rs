//! Exact arithmetic substrate for the Prym local-formula tooling.
//!
//! Everything here works over the rationals (or over finite fields and
//! finite extensions of `Q_p` derived from rational data). Values are
//! immutable once built and can be shared freely between threads.

pub mod error;
pub mod ff;
pub mod intfactor;
pub mod padic;
pub mod poly;
pub mod smith;
pub mod sturm;

pub use error::AlgebraError;
pub use intfactor::{factor_integer, is_probable_prime, FactorConfig, Factorization};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
pub use poly::UniPoly;
pub use sturm::{sturm_isolate_real_roots, IsolatingInterval};

/// Rational numbers are `num_rational::BigRational` (always reduced, positive denominator).
pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
