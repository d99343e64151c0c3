use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("bit length {0} outside the supported range 1..=64")]
    InvalidLength(usize),

    #[error("parity-check matrix is rank deficient: rank {rank}, rows {rows}")]
    RankDeficient { rank: usize, rows: usize },

    #[error("leader table would need {required} bits, cap is {cap} bits")]
    BudgetExceeded { required: u128, cap: u64 },

    #[error("{name} = {value} outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("grid is not strictly increasing")]
    UnsortedGrid,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("degenerate covariance: {0}")]
    Degenerate(String),

    #[error("malformed code file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
