use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{ExactError, Rational};

/// The dyadic grid of spacing 2^(-w) used for snapping real inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicGrid {
    w: u32,
}

impl DyadicGrid {
    pub fn new(w: u32) -> Self {
        assert!(w >= 1, "word-size exponent must be positive");
        DyadicGrid { w }
    }

    pub fn word_size(&self) -> u32 {
        self.w
    }

    /// Grid spacing 2^(-w).
    pub fn spacing(&self) -> Rational {
        Rational::pow2(-(self.w as i64))
    }

    /// Nearest grid multiple inside [0, 1]; exact midpoints round upward.
    pub fn snap(&self, x: &Rational) -> Result<Rational, ExactError> {
        if x < &Rational::zero() || x > &Rational::one() {
            return Err(ExactError::OutOfRange(
                x.to_string(),
                "0".into(),
                "1".into(),
            ));
        }
        Ok(self.snap_lattice(x))
    }

    /// Nearest multiple of 2^(-w) anywhere on the line, ties upward.
    ///
    /// This is the raw lattice map; `snap` adds the [0, 1] domain check the
    /// smoothing experiments rely on.
    pub fn snap_lattice(&self, x: &Rational) -> Rational {
        let scaled = x * &Rational::pow2(self.w as i64);
        let k: BigInt = scaled.round_half_up();
        Rational::from_integer(k) * Rational::pow2(-(self.w as i64))
    }

    /// Snap every coordinate of a point.
    pub fn snap_point(&self, xs: &[Rational]) -> Vec<Rational> {
        xs.iter().map(|x| self.snap_lattice(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::bit_length_rational;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn snap_examples() {
        let g = DyadicGrid::new(2);
        assert_eq!(g.snap(&rat("5/16")).unwrap(), rat("1/4"));
        assert_eq!(g.snap(&rat("3/8")).unwrap(), rat("1/2")); // midpoint, tie up
        assert_eq!(g.snap(&rat("1/4")).unwrap(), rat("1/4")); // fixed point
    }

    #[test]
    fn snap_rejects_out_of_range() {
        let g = DyadicGrid::new(2);
        assert!(g.snap(&rat("-1/8")).is_err());
        assert!(g.snap(&rat("9/8")).is_err());
    }

    #[test]
    fn snap_idempotent_and_close() {
        let g = DyadicGrid::new(5);
        let half_spacing = rat("1/64");
        for i in 0..200i64 {
            let x = Rational::new(i * 13 % 201, 201);
            let s = g.snap(&x).unwrap();
            assert_eq!(g.snap_lattice(&s), s);
            assert!((&s - &x).abs() <= half_spacing);
        }
    }

    #[test]
    fn snapped_values_have_small_bit_length() {
        // A snapped value is k/2^w with k <= 2^w, so its numerator carries
        // at most w+1 bits and the full fraction at most 2w+2.
        use crate::rational::bit_length_int;
        for w in 1..=8u32 {
            let g = DyadicGrid::new(w);
            for i in 0..=50i64 {
                let x = Rational::new(i, 50);
                let s = g.snap(&x).unwrap();
                assert!(bit_length_int(s.numer()).value() <= w as u64 + 1);
                assert!(bit_length_rational(&s).value() <= 2 * w as u64 + 2);
            }
        }
    }

    #[test]
    fn lattice_snap_handles_values_outside_unit_interval() {
        let g = DyadicGrid::new(3);
        // 7/6 * 8 = 28/3, nearest integer 9, so 9/8.
        assert_eq!(g.snap_lattice(&rat("7/6")), rat("9/8"));
        assert_eq!(g.snap_lattice(&rat("-5/16")), rat("-1/4"));
    }
}
