//! End-to-end runs of the syndrome scheme against the channel.

use dirtymac::channel::{ChannelConfig, Fraction};
use dirtymac::code::{golay_23_12, hamming_7_4};
use dirtymac::scheme::{run_simulation, SplitSpec};

#[test]
fn golay_corner_point_is_error_free() {
    let cfg = ChannelConfig::new(23, 3.0 / 23.0, 3.0 / 23.0, 2024).unwrap();
    let code = golay_23_12();
    let report = run_simulation(&cfg, &code, None, 2_000).unwrap();
    assert_eq!(report.decode_errors, 0);
    assert_eq!(report.rate_sum_fraction(), Fraction(11, 23));
    assert_eq!(report.rate2, 0.0);
    // Both transmitted words stayed inside the weight budget on every trial.
    for f in report.max_norm_weights {
        assert!(f.as_f64() <= 3.0 / 23.0);
    }
}

#[test]
fn golay_split_shares_the_syndrome_bits() {
    let cfg = ChannelConfig::new(23, 3.0 / 23.0, 3.0 / 23.0, 7).unwrap();
    let split = SplitSpec::new(6, 5).unwrap();
    let report = run_simulation(&cfg, &golay_23_12(), Some(&split), 500).unwrap();
    assert_eq!(report.decode_errors, 0);
    assert!((report.rate1 - 6.0 / 23.0).abs() < 1e-15);
    assert!((report.rate2 - 5.0 / 23.0).abs() < 1e-15);
}

#[test]
fn admissibility_is_sharp_at_the_covering_radius() {
    let code = hamming_7_4();
    assert_eq!(code.covering_radius(), 1);
    let at_boundary = ChannelConfig::new(7, 1.0 / 7.0, 1.0 / 7.0, 1).unwrap();
    assert!(run_simulation(&at_boundary, &code, None, 10).is_ok());

    let below = ChannelConfig::new(7, 0.1, 1.0 / 7.0, 1).unwrap();
    assert!(run_simulation(&below, &code, None, 10).is_err());
}

#[test]
fn one_dirty_mode_ignores_the_helper_constraint() {
    // q2 far below the covering radius is fine when the second
    // interference word is identically zero.
    let cfg = ChannelConfig::new(7, 3.0 / 7.0, 0.0, 3).unwrap().with_one_dirty();
    let report = run_simulation(&cfg, &hamming_7_4(), None, 200).unwrap();
    assert_eq!(report.decode_errors, 0);
    assert_eq!(report.max_norm_weights[1], Fraction(0, 7));
}

#[test]
fn reports_serialize_with_their_provenance() {
    let cfg = ChannelConfig::new(7, 0.5, 0.5, 5).unwrap();
    let report = run_simulation(&cfg, &hamming_7_4(), None, 50).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["code_id"], "hamming_7_4");
    assert_eq!(json["rng"], "chacha8");
    assert_eq!(json["seed"], 5);
    assert_eq!(json["trials"], 50);
}
