use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::{ExactError, Rational};

/// Parameters of the uniform perturbation in [-delta/2, delta/2].
///
/// Offsets are sampled as exact dyadic rationals with denominator 2^kappa,
/// so no rounding happens inside the sampler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationConfig {
    pub delta: Rational,
    /// Dyadic resolution exponent kappa; offsets are multiples of 2^(-kappa).
    pub resolution: u32,
    pub seed: u64,
}

impl PerturbationConfig {
    pub const DEFAULT_RESOLUTION: u32 = 64;

    pub fn new(delta: Rational, seed: u64) -> Result<Self, ExactError> {
        Self::with_resolution(delta, Self::DEFAULT_RESOLUTION, seed)
    }

    pub fn with_resolution(delta: Rational, resolution: u32, seed: u64) -> Result<Self, ExactError> {
        if delta < Rational::zero() || delta > Rational::one() {
            return Err(ExactError::OutOfRange(
                delta.to_string(),
                "0".into(),
                "1".into(),
            ));
        }
        if resolution < 1 {
            return Err(ExactError::InvalidConfig(
                "resolution exponent must be at least 1".into(),
            ));
        }
        Ok(PerturbationConfig {
            delta,
            resolution,
            seed,
        })
    }
}

/// Derive the rng for one trial from the master seed.
///
/// All randomness flows from a single 64-bit seed; trial `i` reads stream
/// `i` of the ChaCha generator, so trials are independent and can be drawn
/// in any order (or concurrently) with identical results.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// One uniform offset from [-delta/2, delta/2], exactly representable as a
/// multiple of 2^(-kappa). Deterministic for a fixed rng state.
pub fn sample_offset(cfg: &PerturbationConfig, rng: &mut ChaCha8Rng) -> Rational {
    if cfg.delta.is_zero() {
        return Rational::zero();
    }
    // Representable values are v * 2^(-kappa) with v in [lo, hi] where
    // lo = ceil(-delta * 2^(kappa-1)) and hi = floor(delta * 2^(kappa-1)).
    let scale = Rational::pow2(cfg.resolution as i64 - 1);
    let hi: BigInt = (&cfg.delta * &scale).floor();
    let lo: BigInt = -&hi;
    let span: BigUint = (&hi - &lo + BigInt::one())
        .to_biguint()
        .expect("span is positive");
    let draw = rng.gen_biguint_below(&span);
    let v = lo + BigInt::from(draw);
    Rational::from_integer(v) * Rational::pow2(-(cfg.resolution as i64))
}

/// A point offset: one independent coordinate sample per dimension.
pub fn sample_offset_point(
    cfg: &PerturbationConfig,
    rng: &mut ChaCha8Rng,
    dims: usize,
) -> Vec<Rational> {
    (0..dims).map(|_| sample_offset(cfg, rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn degenerate_delta_yields_zero() {
        let cfg = PerturbationConfig::new(Rational::zero(), 7).unwrap();
        let mut rng = trial_rng(7, 0);
        assert_eq!(sample_offset(&cfg, &mut rng), Rational::zero());
    }

    #[test]
    fn samples_stay_in_range_and_are_dyadic() {
        let cfg = PerturbationConfig::with_resolution(rat("1/3"), 16, 99).unwrap();
        let half = rat("1/6");
        let mut rng = trial_rng(99, 0);
        for _ in 0..2000 {
            let s = sample_offset(&cfg, &mut rng);
            assert!(s.abs() <= half);
            // Exactly representable: denominator divides 2^16.
            let denom = s.denom();
            let pow = BigInt::from(1u64 << 16);
            assert!((&pow % denom).is_zero());
        }
    }

    #[test]
    fn deterministic_per_stream() {
        let cfg = PerturbationConfig::new(rat("1/2"), 1234).unwrap();
        let a: Vec<Rational> = (0..10)
            .map(|i| sample_offset(&cfg, &mut trial_rng(1234, i)))
            .collect();
        let b: Vec<Rational> = (0..10)
            .map(|i| sample_offset(&cfg, &mut trial_rng(1234, i)))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_matches_uniform_within_4_sigma() {
        // Monte Carlo oracle: the mean of N uniform draws from
        // [-d/2, d/2] has standard error (d / sqrt(12)) / sqrt(N).
        let n = 100_000u64;
        let delta = rat("1/2");
        let cfg = PerturbationConfig::with_resolution(delta.clone(), 32, 2024).unwrap();
        let mut rng = trial_rng(2024, 0);
        let mut sum = Rational::zero();
        for _ in 0..n {
            sum += &sample_offset(&cfg, &mut rng);
        }
        let mean = sum / Rational::from(n);
        // Compare mean^2 <= 16 * delta^2 / (12 n) exactly.
        let bound = (&delta * &delta) * rat("16") / (rat("12") * Rational::from(n));
        assert!(
            mean.square() <= bound,
            "sample mean {} too far from 0",
            mean.to_f64()
        );
    }
}
