//! The coset transmission scheme and its exact decoder.
//!
//! User 1 carries the payload: it reduces its message syndrome, shifted by
//! the syndrome of its own interference word, to the corresponding coset
//! leader. User 2 either helps silently by cancelling its interference
//! modulo the code, or carries a second payload through a split of the
//! syndrome bits. The receiver recovers the payload as the syndrome of the
//! channel output; the algebra cancels both interference words exactly, so
//! decoding never errs as long as the weight limits admit the code.

use serde::Serialize;

use crate::channel::{random_vector, transmit, trial_rng, ChannelConfig, Fraction, RNG_NAME};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Division of the `n - k` syndrome bits between the two message carriers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSpec {
    pub l1: usize,
    pub l2: usize,
}

impl SplitSpec {
    /// Both halves must be nonempty; a one-sided split is the helper corner
    /// and is run without a `SplitSpec`.
    pub fn new(l1: usize, l2: usize) -> Result<Self> {
        if l1 == 0 || l2 == 0 {
            return Err(Error::Config(format!(
                "split lengths must be positive, got ({l1}, {l2})"
            )));
        }
        Ok(SplitSpec { l1, l2 })
    }

    pub fn total(&self) -> usize {
        self.l1 + self.l2
    }
}

/// Encodes user 1's payload `v1` (`n - k` bits) against its interference
/// word: the coset leader of `v1 + H s1`.
pub fn encode_user1(code: &LinearCode, v1: &BitVector, s1: &BitVector) -> Result<BitVector> {
    if v1.len() != code.redundancy() {
        return Err(Error::DimensionMismatch {
            context: "encode_user1 payload",
            expected: code.redundancy(),
            actual: v1.len(),
        });
    }
    let shifted = v1.xor(&code.syndrome(s1)?)?;
    code.leader_for_syndrome(&shifted)
}

/// Encodes the silent helper: its interference word reduced modulo the code.
pub fn encode_helper(code: &LinearCode, s2: &BitVector) -> Result<BitVector> {
    code.mod_code(s2)
}

/// Encodes both users when the syndrome bits are split between them:
/// user 1 owns the first `l1` bits, user 2 the remaining `l2`.
pub fn encode_split(
    code: &LinearCode,
    split: &SplitSpec,
    m1: &BitVector,
    m2: &BitVector,
    s1: &BitVector,
    s2: &BitVector,
) -> Result<(BitVector, BitVector)> {
    if split.total() != code.redundancy() {
        return Err(Error::Config(format!(
            "split ({}, {}) does not fill the {} syndrome bits",
            split.l1,
            split.l2,
            code.redundancy()
        )));
    }
    if m1.len() != split.l1 || m2.len() != split.l2 {
        return Err(Error::DimensionMismatch {
            context: "encode_split messages",
            expected: split.l1,
            actual: m1.len(),
        });
    }
    let v1 = m1.concat(&BitVector::zeros(split.l2)?)?;
    let v2 = BitVector::zeros(split.l1)?.concat(m2)?;
    let x1 = encode_user1(code, &v1, s1)?;
    let x2 = encode_user1(code, &v2, s2)?;
    Ok((x1, x2))
}

/// Decodes the channel output: the payload is exactly its syndrome.
pub fn decode(code: &LinearCode, y: &BitVector) -> Result<BitVector> {
    code.syndrome(y)
}

/// Splits a decoded payload back into the two message halves.
pub fn split_messages(split: &SplitSpec, v: &BitVector) -> Result<(BitVector, BitVector)> {
    if v.len() != split.total() {
        return Err(Error::DimensionMismatch {
            context: "split_messages",
            expected: split.total(),
            actual: v.len(),
        });
    }
    Ok((v.slice(0, split.l1)?, v.slice(split.l1, split.l2)?))
}

/// Outcome of a simulated run: error counts, exact rate bookkeeping, and the
/// heaviest normalized input weights observed.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeReport {
    pub trials: u64,
    pub decode_errors: u64,
    pub n: usize,
    pub k: usize,
    pub l1: usize,
    pub l2: usize,
    pub rate1: f64,
    pub rate2: f64,
    pub max_norm_weights: [Fraction; 2],
    pub code_id: String,
    pub seed: u64,
    pub rng: &'static str,
}

impl SchemeReport {
    /// Exact rate sum as a ratio of integers, `(l1 + l2) / n`.
    pub fn rate_sum_fraction(&self) -> Fraction {
        Fraction((self.l1 + self.l2) as u64, self.n as u64)
    }
}

/// Simulates `trials` independent channel uses. With `split` absent, user 1
/// carries all `n - k` payload bits and user 2 is the silent helper;
/// otherwise both carry their half of the split.
///
/// Requires the code to fit the weight limits: normalized covering radius at
/// most `q1`, and at most `q2` too unless the channel is one-dirty. Decode
/// errors are counted, not masked; the scheme is exact, so any nonzero count
/// signals a broken code table.
pub fn run_simulation(
    cfg: &ChannelConfig,
    code: &LinearCode,
    split: Option<&SplitSpec>,
    trials: u64,
) -> Result<SchemeReport> {
    cfg.validate()?;
    if code.n() != cfg.n {
        return Err(Error::DimensionMismatch {
            context: "run_simulation block length",
            expected: cfg.n,
            actual: code.n(),
        });
    }
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    if !code.is_admissible(cfg.q1) {
        return Err(Error::Config(format!(
            "covering radius {} of {} exceeds the weight limit q1 = {}",
            code.covering_radius(),
            code.n(),
            cfg.q1
        )));
    }
    if !cfg.one_dirty && !code.is_admissible(cfg.q2) {
        return Err(Error::Config(format!(
            "covering radius {} of {} exceeds the weight limit q2 = {}",
            code.covering_radius(),
            code.n(),
            cfg.q2
        )));
    }
    if let Some(sp) = split {
        if sp.total() != code.redundancy() {
            return Err(Error::Config(format!(
                "split ({}, {}) does not fill the {} syndrome bits",
                sp.l1,
                sp.l2,
                code.redundancy()
            )));
        }
    }

    let mut decode_errors = 0u64;
    let mut max_w1 = 0usize;
    let mut max_w2 = 0usize;

    for t in 0..trials {
        let mut rng = trial_rng(cfg.seed, t);
        let (s1, s2) = cfg.draw_states(&mut rng)?;
        let (record, correct) = match split {
            None => {
                let v1 = random_vector(&mut rng, code.redundancy())?;
                let x1 = encode_user1(code, &v1, &s1)?;
                let x2 = encode_helper(code, &s2)?;
                let record = transmit(&x1, &x2, &s1, &s2)?;
                let decoded = decode(code, &record.y)?;
                (record, decoded == v1)
            }
            Some(sp) => {
                let m1 = random_vector(&mut rng, sp.l1)?;
                let m2 = random_vector(&mut rng, sp.l2)?;
                let (x1, x2) = encode_split(code, sp, &m1, &m2, &s1, &s2)?;
                let record = transmit(&x1, &x2, &s1, &s2)?;
                let decoded = decode(code, &record.y)?;
                let (m1_hat, m2_hat) = split_messages(sp, &decoded)?;
                (record, m1_hat == m1 && m2_hat == m2)
            }
        };
        if !correct {
            decode_errors += 1;
        }
        max_w1 = max_w1.max(record.x1.weight());
        max_w2 = max_w2.max(record.x2.weight());
    }

    let (l1, l2) = match split {
        None => (code.redundancy(), 0),
        Some(sp) => (sp.l1, sp.l2),
    };
    Ok(SchemeReport {
        trials,
        decode_errors,
        n: code.n(),
        k: code.k(),
        l1,
        l2,
        rate1: l1 as f64 / code.n() as f64,
        rate2: l2 as f64 / code.n() as f64,
        max_norm_weights: [
            Fraction(max_w1 as u64, code.n() as u64),
            Fraction(max_w2 as u64, code.n() as u64),
        ],
        code_id: code.id().to_string(),
        seed: cfg.seed,
        rng: RNG_NAME,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{hamming_7_4, repetition};

    #[test]
    fn helper_corner_decodes_exactly() {
        let cfg = ChannelConfig::new(7, 1.0 / 7.0, 1.0 / 7.0, 11).unwrap();
        let code = hamming_7_4();
        let report = run_simulation(&cfg, &code, None, 500).unwrap();
        assert_eq!(report.decode_errors, 0);
        assert_eq!(report.trials, 500);
        assert_eq!((report.l1, report.l2), (3, 0));
        assert_eq!(report.rate_sum_fraction(), Fraction(3, 7));
        assert!(report.max_norm_weights[0].0 <= 1);
        assert!(report.max_norm_weights[1].0 <= 1);
        assert_eq!(report.code_id, "hamming_7_4");
    }

    #[test]
    fn split_mode_decodes_exactly() {
        let cfg = ChannelConfig::new(7, 0.2, 0.2, 3).unwrap();
        let code = hamming_7_4();
        let split = SplitSpec::new(2, 1).unwrap();
        let report = run_simulation(&cfg, &code, Some(&split), 500).unwrap();
        assert_eq!(report.decode_errors, 0);
        assert_eq!((report.l1, report.l2), (2, 1));
        assert!((report.rate1 - 2.0 / 7.0).abs() < 1e-15);
        assert!((report.rate2 - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn decoded_payload_ignores_the_interference_pair() {
        let code = hamming_7_4();
        let v1: BitVector = "101".parse().unwrap();
        for s_word in [0u64, 13, 77, 127] {
            let s1 = BitVector::from_word(s_word, 7).unwrap();
            let s2 = BitVector::from_word(s_word ^ 0x55, 7).unwrap();
            let x1 = encode_user1(&code, &v1, &s1).unwrap();
            let x2 = encode_helper(&code, &s2).unwrap();
            let rec = transmit(&x1, &x2, &s1, &s2).unwrap();
            assert_eq!(decode(&code, &rec.y).unwrap(), v1);
        }
    }

    #[test]
    fn every_input_respects_the_covering_radius() {
        let code = hamming_7_4();
        for word in 0..128u64 {
            let s = BitVector::from_word(word, 7).unwrap();
            assert!(encode_helper(&code, &s).unwrap().weight() <= 1);
            let v: BitVector = "110".parse().unwrap();
            assert!(encode_user1(&code, &v, &s).unwrap().weight() <= 1);
        }
    }

    #[test]
    fn exhaustive_split_recovery_on_a_small_code() {
        // Repetition code of length 4: one syndrome bit per adjacent pair.
        let code = repetition(4).unwrap();
        let split = SplitSpec::new(2, 1).unwrap();
        for m1_word in 0..4u64 {
            for m2_word in 0..2u64 {
                for s1_word in (0..16).step_by(3) {
                    let m1 = BitVector::from_word(m1_word, 2).unwrap();
                    let m2 = BitVector::from_word(m2_word, 1).unwrap();
                    let s1 = BitVector::from_word(s1_word, 4).unwrap();
                    let s2 = BitVector::from_word(15 - s1_word, 4).unwrap();
                    let (x1, x2) = encode_split(&code, &split, &m1, &m2, &s1, &s2).unwrap();
                    let rec = transmit(&x1, &x2, &s1, &s2).unwrap();
                    let v = decode(&code, &rec.y).unwrap();
                    let (m1_hat, m2_hat) = split_messages(&split, &v).unwrap();
                    assert_eq!((m1_hat, m2_hat), (m1, m2));
                }
            }
        }
    }

    #[test]
    fn inadmissible_weight_limit_is_rejected() {
        let cfg = ChannelConfig::new(7, 0.1, 0.5, 0).unwrap();
        let err = run_simulation(&cfg, &hamming_7_4(), None, 10).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let cfg = ChannelConfig::new(7, 0.5, 0.1, 0).unwrap();
        assert!(run_simulation(&cfg, &hamming_7_4(), None, 10).is_err());
    }

    #[test]
    fn one_dirty_ignores_q2_and_keeps_the_helper_silent() {
        let cfg = ChannelConfig::new(7, 0.2, 0.0, 5).unwrap().with_one_dirty();
        let report = run_simulation(&cfg, &hamming_7_4(), None, 300).unwrap();
        assert_eq!(report.decode_errors, 0);
        assert_eq!(report.max_norm_weights[1], Fraction(0, 7));
    }

    #[test]
    fn bad_split_is_rejected() {
        assert!(SplitSpec::new(0, 3).is_err());
        let cfg = ChannelConfig::new(7, 0.2, 0.2, 0).unwrap();
        let split = SplitSpec::new(2, 2).unwrap();
        assert!(matches!(
            run_simulation(&cfg, &hamming_7_4(), Some(&split), 10),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn mismatched_block_length_is_rejected() {
        let cfg = ChannelConfig::new(8, 0.2, 0.2, 0).unwrap();
        assert!(matches!(
            run_simulation(&cfg, &hamming_7_4(), None, 10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn report_serializes_with_generator_name() {
        let cfg = ChannelConfig::new(7, 0.5, 0.5, 2).unwrap();
        let report = run_simulation(&cfg, &hamming_7_4(), None, 10).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"rng\":\"chacha8\""));
        assert!(json.contains("\"code_id\":\"hamming_7_4\""));
    }
}
