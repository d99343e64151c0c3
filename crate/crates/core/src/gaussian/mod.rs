//! Real-valued additive companion: two users fight known Gaussian
//! interference of unbounded power.
//!
//! At high SNR the sum capacity is `½ log2(min(P1, P2)/N)` and a scalar
//! modulo-lattice strategy reaches it up to the shaping loss
//! `½ log2(πe/6)`; the naive Costa strategy `U_i = X_i + α_i S_i` collapses
//! to zero instead. This module has the closed forms plus a Monte-Carlo
//! evaluator for the sum-rate functional on caller-supplied strategy
//! families.

mod entropy;

pub use entropy::{
    gaussian_calibration_residual_bits, spacing_entropy_bits, unit_normal_entropy_bits,
    EULER_MASCHERONI,
};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::{trial_rng, RNG_NAME};
use crate::error::{Error, Result};

fn check_variance(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Domain {
            name,
            value,
            range: "(0, inf)",
        });
    }
    Ok(())
}

/// `½ log2(min(P1, P2)/N)`: the sum capacity when both interference powers
/// grow without bound and SNR is high.
pub fn high_snr_sum_capacity(power1: f64, power2: f64, noise: f64) -> Result<f64> {
    check_variance("power1", power1)?;
    check_variance("power2", power2)?;
    check_variance("noise", noise)?;
    Ok(0.5 * (power1.min(power2) / noise).log2())
}

/// `½ log2(πe/6)`, the rate left on the table by a scalar (cubic) lattice:
/// about 0.2546 bits, or a 1.53 dB power penalty.
pub fn shaping_loss() -> f64 {
    0.5 * (std::f64::consts::PI * std::f64::consts::E / 6.0).log2()
}

/// Exact sum rate of the jointly Gaussian strategy `U_i = X_i + α_i S_i`
/// with `X_i ~ N(0, P_i)` independent of `S_i ~ N(0, Q_i)`, clamped at 0.
///
/// Everything is a determinant ratio on the joint covariance: the channel
/// output has variance `P1 + P2 + Q1 + Q2 + N`, and conditioning on the
/// independent pair `(U1, U2)` subtracts each user's squared regression
/// coefficient.
pub fn gaussian_costa_sum_rate(
    power1: f64,
    power2: f64,
    noise: f64,
    interference1: f64,
    interference2: f64,
    alpha1: f64,
    alpha2: f64,
) -> Result<f64> {
    check_variance("power1", power1)?;
    check_variance("power2", power2)?;
    check_variance("noise", noise)?;
    check_variance("interference1", interference1)?;
    check_variance("interference2", interference2)?;
    for (name, alpha) in [("alpha1", alpha1), ("alpha2", alpha2)] {
        if !alpha.is_finite() {
            return Err(Error::Domain {
                name,
                value: alpha,
                range: "finite",
            });
        }
    }

    let var_y = power1 + power2 + interference1 + interference2 + noise;
    let var_u1 = power1 + alpha1 * alpha1 * interference1;
    let var_u2 = power2 + alpha2 * alpha2 * interference2;
    let cross1 = power1 + alpha1 * interference1;
    let cross2 = power2 + alpha2 * interference2;
    let cond = var_y - cross1 * cross1 / var_u1 - cross2 * cross2 / var_u2;
    if !cond.is_finite() || cond <= 0.0 {
        return Err(Error::Degenerate(format!(
            "conditional output variance {cond} is not positive"
        )));
    }
    let info_joint = 0.5 * (var_y / cond).log2();
    let penalty1 = 0.5 * (var_u1 / power1).log2();
    let penalty2 = 0.5 * (var_u2 / power2).log2();
    Ok((info_joint - penalty1 - penalty2).max(0.0))
}

/// Powers and Monte-Carlo budget for the lattice-strategy experiments.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GaussianConfig {
    pub power1: f64,
    pub power2: f64,
    pub noise: f64,
    pub interference1: f64,
    pub interference2: f64,
    pub samples: usize,
    pub seed: u64,
}

impl GaussianConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        power1: f64,
        power2: f64,
        noise: f64,
        interference1: f64,
        interference2: f64,
        samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let cfg = GaussianConfig {
            power1,
            power2,
            noise,
            interference1,
            interference2,
            samples,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_variance("power1", self.power1)?;
        check_variance("power2", self.power2)?;
        check_variance("noise", self.noise)?;
        check_variance("interference1", self.interference1)?;
        check_variance("interference2", self.interference2)?;
        if self.samples < 10_000 {
            return Err(Error::Config(format!(
                "entropy estimation needs at least 10000 samples, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// Reduces `x` into `[-modulus/2, modulus/2)`.
pub fn centered_mod(x: f64, modulus: f64) -> f64 {
    assert!(modulus > 0.0, "modulus must be positive");
    let r = x.rem_euclid(modulus);
    if r >= modulus / 2.0 {
        r - modulus
    } else {
        r
    }
}

/// The six estimated entropy terms of the sum-rate functional, in bits.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropyTerms {
    pub v1: f64,
    pub v2: f64,
    /// `h(V'1 + V'2 + Z)`.
    pub mix: f64,
    pub interference_sum: f64,
    pub interference1: f64,
    pub interference2: f64,
}

/// A Monte-Carlo evaluation of the sum-rate functional at one strategy.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GFunctionalEstimate {
    /// `[raw_bits]^+`.
    pub value_bits: f64,
    pub raw_bits: f64,
    pub terms: EntropyTerms,
    /// Estimated `E{(V_i - V'_i)^2}`, the power actually spent by each user.
    pub constraint_mean_square: [f64; 2],
    pub samples: usize,
}

fn split_half_check(name: &'static str, draws: &[f64]) -> Result<f64> {
    let full = spacing_entropy_bits(draws)?;
    let (a, b) = draws.split_at(draws.len() / 2);
    let gap = (spacing_entropy_bits(a)? - spacing_entropy_bits(b)?).abs();
    if gap > 0.5 {
        return Err(Error::Precision(format!(
            "entropy term {name} disagrees across sample halves by {gap:.3} bits"
        )));
    }
    Ok(full)
}

/// Estimates `[h(V1) + h(V2) - h(V'1+V'2+Z) + h(S1+S2) - h(S1) - h(S2)]^+`
/// from the given samplers. Each pair sampler yields one `(V_i, V'_i)` draw;
/// the remaining samplers yield noise and interference draws.
pub fn g_functional<P1, P2, NZ, I1, I2>(
    mut pair1: P1,
    mut pair2: P2,
    mut noise: NZ,
    mut interference1: I1,
    mut interference2: I2,
    samples: usize,
) -> Result<GFunctionalEstimate>
where
    P1: FnMut() -> (f64, f64),
    P2: FnMut() -> (f64, f64),
    NZ: FnMut() -> f64,
    I1: FnMut() -> f64,
    I2: FnMut() -> f64,
{
    if samples < 32 {
        return Err(Error::Precision(format!(
            "sample budget {samples} too small for entropy estimation"
        )));
    }
    let mut v1 = Vec::with_capacity(samples);
    let mut v2 = Vec::with_capacity(samples);
    let mut mix = Vec::with_capacity(samples);
    let mut s_sum = Vec::with_capacity(samples);
    let mut s1 = Vec::with_capacity(samples);
    let mut s2 = Vec::with_capacity(samples);
    let mut ms = [0.0f64; 2];
    for _ in 0..samples {
        let (a, a_prime) = pair1();
        let (b, b_prime) = pair2();
        let z = noise();
        let c = interference1();
        let d = interference2();
        v1.push(a);
        v2.push(b);
        mix.push(a_prime + b_prime + z);
        s_sum.push(c + d);
        s1.push(c);
        s2.push(d);
        ms[0] += (a - a_prime) * (a - a_prime);
        ms[1] += (b - b_prime) * (b - b_prime);
    }

    let terms = EntropyTerms {
        v1: split_half_check("v1", &v1)?,
        v2: split_half_check("v2", &v2)?,
        mix: split_half_check("mix", &mix)?,
        interference_sum: split_half_check("interference_sum", &s_sum)?,
        interference1: split_half_check("interference1", &s1)?,
        interference2: split_half_check("interference2", &s2)?,
    };
    let raw = terms.v1 + terms.v2 - terms.mix + terms.interference_sum
        - terms.interference1
        - terms.interference2;
    Ok(GFunctionalEstimate {
        value_bits: raw.max(0.0),
        raw_bits: raw,
        terms,
        constraint_mean_square: [ms[0] / samples as f64, ms[1] / samples as f64],
        samples,
    })
}

/// Outcome of the modulo-lattice experiment.
#[derive(Clone, Debug, Serialize)]
pub struct ModDeltaReport {
    pub config: GaussianConfig,
    pub capacity_bits: f64,
    pub estimate_bits: f64,
    pub std_error_bits: f64,
    /// `capacity_bits - estimate_bits`; the shaping loss should sit here.
    pub gap_bits: f64,
    pub delta: [f64; 2],
    pub estimate: GFunctionalEstimate,
    pub rng: &'static str,
}

fn gauss(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    rng.sample::<f64, _>(StandardNormal) * sd
}

fn lattice_family_estimate(
    cfg: &GaussianConfig,
    delta: [f64; 2],
    block: u64,
    samples: usize,
) -> Result<GFunctionalEstimate> {
    let mut pair1_rng = trial_rng(cfg.seed, block * 8 + 1);
    let mut pair2_rng = trial_rng(cfg.seed, block * 8 + 2);
    let mut noise_rng = trial_rng(cfg.seed, block * 8 + 3);
    let mut s1_rng = trial_rng(cfg.seed, block * 8 + 4);
    let mut s2_rng = trial_rng(cfg.seed, block * 8 + 5);
    let sd1 = cfg.interference1.sqrt();
    let sd2 = cfg.interference2.sqrt();
    let noise_sd = cfg.noise.sqrt();
    g_functional(
        || {
            let s = gauss(&mut pair1_rng, sd1);
            (s, s - centered_mod(s, delta[0]))
        },
        || {
            let s = gauss(&mut pair2_rng, sd2);
            (s, s - centered_mod(s, delta[1]))
        },
        || gauss(&mut noise_rng, noise_sd),
        || gauss(&mut s1_rng, sd1),
        || gauss(&mut s2_rng, sd2),
        samples,
    )
}

/// Evaluates the scalar modulo-lattice strategy: each user keeps the
/// interference word itself as `V_i` and quantizes it onto the lattice
/// `√(12 P_i) · Z` for `V'_i`, so the quantization error carries exactly the
/// allowed power. The standard error comes from eight independent
/// re-estimation blocks.
pub fn mod_delta_sum_rate_estimate(cfg: &GaussianConfig) -> Result<ModDeltaReport> {
    cfg.validate()?;
    let snr = cfg.power1.min(cfg.power2) / cfg.noise;
    if snr < 100.0 {
        return Err(Error::Config(format!(
            "high-SNR regime requires min(P1, P2)/N >= 100, got {snr}"
        )));
    }
    if cfg.interference1 < 1e4 * cfg.power1 || cfg.interference2 < 1e4 * cfg.power2 {
        return Err(Error::Config(
            "strong-interference proxy requires Q_i >= 10^4 P_i".into(),
        ));
    }

    let delta = [(12.0 * cfg.power1).sqrt(), (12.0 * cfg.power2).sqrt()];
    let estimate = lattice_family_estimate(cfg, delta, 0, cfg.samples)?;

    let block_samples = cfg.samples / 8;
    let mut block_raws = [0.0f64; 8];
    for (i, raw) in block_raws.iter_mut().enumerate() {
        *raw = lattice_family_estimate(cfg, delta, i as u64 + 1, block_samples)?.raw_bits;
    }
    let mean = block_raws.iter().sum::<f64>() / 8.0;
    let var = block_raws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 7.0;
    let std_error_bits = (var / 8.0).sqrt();

    let capacity_bits = high_snr_sum_capacity(cfg.power1, cfg.power2, cfg.noise)?;
    Ok(ModDeltaReport {
        config: *cfg,
        capacity_bits,
        estimate_bits: estimate.value_bits,
        std_error_bits,
        gap_bits: capacity_bits - estimate.value_bits,
        delta,
        estimate,
        rng: RNG_NAME,
    })
}
