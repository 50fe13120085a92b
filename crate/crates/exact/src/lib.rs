//! Exact rational numbers and the measurement/snapping utilities built on them.
//!
//! Everything downstream (the register machine, the formula compiler, the
//! experiment lab, the geometry routines) funnels its numeric work through
//! this crate so that no floating point ever enters a semantic decision.

mod rational;
mod sampling;
mod snapping;

pub use rational::{bit_length_int, bit_length_rational, BitLength, ExactError, Rational};
pub use sampling::{sample_offset, sample_offset_point, trial_rng, PerturbationConfig};
pub use snapping::DyadicGrid;

pub use num_bigint::{BigInt, BigUint, Sign};

/// Floor square root restricted to perfect squares.
///
/// Returns `Some(r)` with `r * r == n` or `None` when `n` is negative or not
/// a perfect square.
pub fn perfect_square_sqrt(n: &BigInt) -> Option<BigInt> {
    use num_traits::Signed;
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a rational, defined only when both numerator and
/// denominator of the canonical form are perfect squares.
pub fn rational_sqrt_exact(x: &Rational) -> Option<Rational> {
    let p = perfect_square_sqrt(x.numer())?;
    let q = perfect_square_sqrt(x.denom())?;
    Some(Rational::from_ratio(p, q))
}
