use num_traits::Zero;
use proptest::prelude::*;
use rram_exact::{bit_length_rational, DyadicGrid, Rational};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (any::<i64>(), 1i64..=i64::MAX).prop_map(|(n, d)| Rational::new(n.rem_euclid(1 << 40), d))
}

proptest! {
    // Canonical form is preserved by arithmetic: round-trips recover the
    // original value exactly.
    #[test]
    fn add_then_subtract_is_identity(a in arb_rational(), b in arb_rational()) {
        let roundtrip = (&a + &b) - &b;
        prop_assert_eq!(roundtrip, a);
    }

    #[test]
    fn multiply_then_divide_is_identity(a in arb_rational(), b in arb_rational()) {
        prop_assume!(!b.is_zero());
        let roundtrip = (&a * &b) / &b;
        prop_assert_eq!(roundtrip, a);
    }

    #[test]
    fn denominators_stay_positive(a in arb_rational(), b in arb_rational()) {
        use num_traits::Signed;
        let ops = [&a + &b, &a - &b, &a * &b];
        for v in ops {
            prop_assert!(v.denom().is_positive());
        }
    }

    #[test]
    fn snap_error_at_most_half_spacing(num in 0u64..=10_000, w in 1u32..=12) {
        let x = Rational::from_ratio(num.into(), 10_000.into());
        let grid = DyadicGrid::new(w);
        let snapped = grid.snap(&x).unwrap();
        let err = (&snapped - &x).abs();
        prop_assert!(err <= Rational::pow2(-(w as i64 + 1)));
        // Idempotence on grid points.
        prop_assert_eq!(grid.snap_lattice(&snapped), snapped.clone());
        // Snapped values of [0,1] never need more than 2w + 2 bits in total.
        prop_assert!(bit_length_rational(&snapped).value() <= 2 * w as u64 + 2);
    }
}
