//! The two-user binary adder channel with per-user additive interference.
//!
//! Both interference words are drawn with independent fair bits. Each user
//! sees only its own word before transmitting, and the channel output is the
//! bitwise XOR of the two inputs and the two interference words.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Name of the generator every simulation in this crate uses; recorded in
/// reports so runs can be reproduced.
pub const RNG_NAME: &str = "chacha8";

/// Counter-based generator for trial `trial` of a run seeded with `seed`.
/// Trials get independent streams, so they can be replayed in isolation.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `len` independent fair bits.
pub fn random_vector(rng: &mut impl RngCore, len: usize) -> Result<BitVector> {
    if len == 0 || len > 64 {
        return Err(Error::InvalidLength(len));
    }
    let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    BitVector::from_word(rng.next_u64() & mask, len)
}

/// Static description of one channel use: block length, per-user normalized
/// weight limits, and the interference mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub n: usize,
    pub q1: f64,
    pub q2: f64,
    /// When set, the second interference word is identically zero and `q2`
    /// plays no role downstream.
    pub one_dirty: bool,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(n: usize, q1: f64, q2: f64, seed: u64) -> Result<Self> {
        let cfg = ChannelConfig {
            n,
            q1,
            q2,
            one_dirty: false,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_one_dirty(mut self) -> Self {
        self.one_dirty = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 64 {
            return Err(Error::InvalidLength(self.n));
        }
        if !(0.0..=0.5).contains(&self.q1) {
            return Err(Error::Domain {
                name: "q1",
                value: self.q1,
                range: "[0, 1/2]",
            });
        }
        if !(0.0..=0.5).contains(&self.q2) {
            return Err(Error::Domain {
                name: "q2",
                value: self.q2,
                range: "[0, 1/2]",
            });
        }
        Ok(())
    }

    /// Draws the interference pair for one trial, first word then second.
    pub fn draw_states(&self, rng: &mut impl RngCore) -> Result<(BitVector, BitVector)> {
        let s1 = random_vector(rng, self.n)?;
        let s2 = if self.one_dirty {
            BitVector::zeros(self.n)?
        } else {
            random_vector(rng, self.n)?
        };
        Ok((s1, s2))
    }
}

/// Exact ratio `num / den`; serialized as the pair `[num, den]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fraction(pub u64, pub u64);

impl Fraction {
    pub fn as_f64(&self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

/// Everything observable about a single channel use, with the input weights
/// kept as exact ratios of integers.
#[derive(Clone, Debug, Serialize)]
pub struct TransmissionRecord {
    pub s1: BitVector,
    pub s2: BitVector,
    pub x1: BitVector,
    pub x2: BitVector,
    pub y: BitVector,
    pub normalized_weights: [Fraction; 2],
}

impl TransmissionRecord {
    /// One JSON object on a single line, for appending to trial logs.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }
}

/// Runs the channel once: `y` is the XOR of both inputs and both
/// interference words.
pub fn transmit(
    x1: &BitVector,
    x2: &BitVector,
    s1: &BitVector,
    s2: &BitVector,
) -> Result<TransmissionRecord> {
    let y = x1.xor(x2)?.xor(s1)?.xor(s2)?;
    let n = y.len() as u64;
    Ok(TransmissionRecord {
        s1: *s1,
        s2: *s2,
        x1: *x1,
        x2: *x2,
        y,
        normalized_weights: [
            Fraction(x1.weight() as u64, n),
            Fraction(x2.weight() as u64, n),
        ],
    })
}
