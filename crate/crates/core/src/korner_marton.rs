//! Distributed encoding of the modulo-two sum of two correlated sources.
//!
//! Two encoders observe binary words `x` and `y` with `P(x_i != y_i) = theta`
//! and separately send syndromes of the same linear code. The decoder adds
//! the syndromes, which yields the syndrome of `z = x ^ y`, and recovers `z`
//! through the coset-leader map. Sending full Slepian-Wolf descriptions of
//! `(x, y)` would cost `1 + H_b(theta)` bits per symbol pair; the syndrome
//! strategy approaches `2 H_b(theta)`.

use rand::Rng;
use serde::Serialize;

use crate::channel::{random_vector, trial_rng, Fraction, RNG_NAME};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::single_letter::hb;

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&theta) {
        return Err(Error::Domain {
            name: "theta",
            value: theta,
            range: "[0, 1/2]",
        });
    }
    Ok(())
}

/// Rate sum of the syndrome strategy: `2 H_b(theta)` bits per symbol pair.
pub fn km_rate_sum(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(2.0 * hb(theta))
}

/// Rate sum for recovering both sources outright: `1 + H_b(theta)`.
pub fn sw_rate_sum(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(1.0 + hb(theta))
}

/// Source pair parameters for the finite-blocklength demo.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KmSourceConfig {
    pub n: usize,
    pub theta: f64,
    pub seed: u64,
}

impl KmSourceConfig {
    pub fn new(n: usize, theta: f64, seed: u64) -> Result<Self> {
        let cfg = KmSourceConfig { n, theta, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 64 {
            return Err(Error::InvalidLength(self.n));
        }
        check_theta(self.theta)
    }
}

/// Outcome of a syndrome-decoding run.
#[derive(Clone, Debug, Serialize)]
pub struct KmDemoReport {
    pub theta: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub empirical_error_rate: f64,
    /// Bits sent per source symbol by each encoder: `(n - k) / n`.
    pub rate_per_encoder: Fraction,
    pub km_bound: f64,
    pub sw_bound: f64,
    pub code_id: String,
    pub seed: u64,
    pub rng: &'static str,
}

/// Runs `trials` independent source draws through the syndrome scheme and
/// counts the blocks where the decoder misses `z`.
pub fn km_scheme_demo(
    cfg: &KmSourceConfig,
    code: &LinearCode,
    trials: u64,
) -> Result<KmDemoReport> {
    cfg.validate()?;
    if code.n() != cfg.n {
        return Err(Error::DimensionMismatch {
            context: "source block length",
            expected: cfg.n,
            actual: code.n(),
        });
    }
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }

    let mut block_errors = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let x = random_vector(&mut rng, cfg.n)?;
        let mut z = BitVector::zeros(cfg.n)?;
        for i in 0..cfg.n {
            if rng.gen_bool(cfg.theta) {
                z.set(i, true);
            }
        }
        let y = x.xor(&z)?;
        let summed = code.syndrome(&x)?.xor(&code.syndrome(&y)?)?;
        let decoded = code.leader_for_syndrome(&summed)?;
        if decoded != z {
            block_errors += 1;
        }
    }

    Ok(KmDemoReport {
        theta: cfg.theta,
        trials,
        block_errors,
        empirical_error_rate: block_errors as f64 / trials as f64,
        rate_per_encoder: Fraction(code.redundancy() as u64, code.n() as u64),
        km_bound: km_rate_sum(cfg.theta)?,
        sw_bound: sw_rate_sum(cfg.theta)?,
        code_id: code.id().to_string(),
        seed: cfg.seed,
        rng: RNG_NAME,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::hamming_7_4;

    #[test]
    fn bound_endpoints() {
        assert_eq!(km_rate_sum(0.0).unwrap(), 0.0);
        assert_eq!(km_rate_sum(0.5).unwrap(), 2.0);
        assert_eq!(sw_rate_sum(0.0).unwrap(), 1.0);
        assert_eq!(sw_rate_sum(0.5).unwrap(), 2.0);
        assert!(km_rate_sum(-0.01).is_err());
        assert!(sw_rate_sum(0.51).is_err());
    }

    #[test]
    fn bounds_at_eleven_percent() {
        assert!((km_rate_sum(0.11).unwrap() - 0.999_831_916_329_056).abs() < 1e-12);
        assert!((sw_rate_sum(0.11).unwrap() - 1.499_915_958_164_528).abs() < 1e-12);
    }

    #[test]
    fn gap_identity_across_the_domain() {
        for i in 0..=500 {
            let theta = i as f64 / 1000.0;
            let gap = sw_rate_sum(theta).unwrap() - km_rate_sum(theta).unwrap();
            assert!(
                (gap - (1.0 - hb(theta))).abs() <= 1e-15,
                "gap identity violated at theta = {theta}"
            );
            if theta < 0.5 {
                assert!(gap > 0.0);
            }
        }
    }

    #[test]
    fn noiseless_sources_never_err() {
        let cfg = KmSourceConfig::new(7, 0.0, 11).unwrap();
        let report = km_scheme_demo(&cfg, &hamming_7_4(), 200).unwrap();
        assert_eq!(report.block_errors, 0);
        assert_eq!(report.rate_per_encoder, Fraction(3, 7));
    }

    #[test]
    fn errors_are_exactly_the_heavy_difference_patterns() {
        // With a perfect single-error-correcting code the leader map inverts
        // the syndrome precisely on words of weight <= 1, so which blocks
        // fail depends on z alone, never on the common part of (x, y).
        let code = hamming_7_4();
        for pattern in 0u64..(1 << 7) {
            let z = BitVector::from_word(pattern, 7).unwrap();
            for x_word in [0u64, 0b1010101, 0b1111111] {
                let x = BitVector::from_word(x_word, 7).unwrap();
                let y = x.xor(&z).unwrap();
                let summed = code
                    .syndrome(&x)
                    .unwrap()
                    .xor(&code.syndrome(&y).unwrap())
                    .unwrap();
                let decoded = code.leader_for_syndrome(&summed).unwrap();
                assert_eq!(decoded != z, z.weight() > 1, "pattern {pattern:#09b}");
            }
        }
    }

    #[test]
    fn demo_is_deterministic_in_the_seed() {
        let cfg = KmSourceConfig::new(7, 0.1, 99).unwrap();
        let a = km_scheme_demo(&cfg, &hamming_7_4(), 400).unwrap();
        let b = km_scheme_demo(&cfg, &hamming_7_4(), 400).unwrap();
        assert_eq!(a.block_errors, b.block_errors);
        assert!(a.block_errors > 0, "theta = 0.1 should trip some blocks");
    }

    #[test]
    fn demo_rejects_mismatched_block_lengths() {
        let cfg = KmSourceConfig::new(8, 0.1, 1).unwrap();
        assert!(matches!(
            km_scheme_demo(&cfg, &hamming_7_4(), 10),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(KmSourceConfig::new(7, 0.6, 1).is_err());
        assert!(KmSourceConfig::new(0, 0.1, 1).is_err());
    }
}
