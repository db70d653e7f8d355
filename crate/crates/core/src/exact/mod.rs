//! Exact scalar arithmetic: arbitrary-precision rationals, radical numbers
//! (finite sums of rational multiples of square roots), and exact Wigner 3j
//! symbols.

mod radical;
mod wigner;

pub use radical::RadicalNumber;
pub use wigner::{wigner3j, wigner3j_x, wigner3j_z, Sign, ThreeJArgs};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("projection |m| = {m} exceeds j = {j}")]
    ProjectionOutOfRange { j: u32, m: i64 },
    #[error("radicand {0} is too large to normalize to square-free form")]
    RadicandTooLarge(u128),
    #[error("division by zero radical number")]
    DivisionByZero,
    #[error("radical number {0} has no single-term reciprocal")]
    NotInvertible(String),
}

/// Rational from an unsigned machine integer.
pub fn rational_from_u128(n: u128) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(n))
}

/// Rational from a signed machine integer.
pub fn rational_from_i64(n: i64) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(n))
}
