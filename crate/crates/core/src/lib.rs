//! Exact arithmetic for geometric cluster algebras: matrix mutation, the
//! piecewise-linear mutation maps and their fan, g-vectors, rank-2 universal
//! coefficients and coefficient specialization.
//!
//! Indices are 0-based throughout the library. Mutation sequences are given in
//! application order: `[k1, k2, k3]` means apply `mu_k1` first. Written as a
//! composite this is `mu_k3 . mu_k2 . mu_k1`.
//!
//! Most numeric routines are generic over [`Scalar`]; the aliases below fix
//! the concrete types used by the rest of the crate.

pub mod error;
pub mod exchange;
pub mod fanviz;
pub mod gvec;
pub mod io;
pub mod linalg;
pub mod mutmap;
pub mod pattern;
pub mod rank2;
pub mod scalar;
pub mod specialize;
pub mod tropical;

pub use error::{Error, Result};
pub use exchange::{ExchangeMatrix, ExtendedExchangeMatrix};
pub use scalar::{Field, Scalar};

/// Arbitrary precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary precision rational.
pub type Rational = num_rational::BigRational;
/// Integer vector.
pub type IntVec = Vec<Int>;
/// Rational vector.
pub type RatVec = Vec<Rational>;
/// A linear relation with rational coefficients and vectors.
pub type RatRelation = mutmap::LinearRelation<Rational>;

/// Integer from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Rational `p/q`. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

/// Integer vector from machine integers.
pub fn ivec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Rational vector from machine integers.
pub fn rvec(v: &[i64]) -> RatVec {
    v.iter().map(|&x| Rational::from_integer(Int::from(x))).collect()
}
