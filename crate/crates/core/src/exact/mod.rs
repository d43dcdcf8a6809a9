//! Exact arithmetic substrate: rationals, the real radical field
//! Q(sqrt2, sqrt3), and integer lattices in Hermite normal form.

mod lattice;
mod real;

pub use lattice::IntLattice;
pub use real::ExactReal;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// `q * scale` as an integer; `scale` must be a multiple of the denominator.
pub(crate) fn scaled_integer(q: &BigRat, scale: &BigInt) -> BigInt {
    let (quot, rem) = (q.numer() * scale).div_rem(q.denom());
    debug_assert!(rem.is_zero());
    quot
}
