//! Command-line front door: every command writes its results to files named
//! by `--out`, plus a `<out>.manifest.json` recording the command, the full
//! parameter set, the seed, and a hash of any code file, so a run can be
//! reproduced from its artifacts alone.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use dirtymac::channel::ChannelConfig;
use dirtymac::code::{parse_code_file_with_cap, LinearCode, DEFAULT_TABLE_CAP_BITS};
use dirtymac::gaussian::{
    gaussian_calibration_residual_bits, mod_delta_sum_rate_estimate, GaussianConfig,
};
use dirtymac::korner_marton::{km_scheme_demo, KmSourceConfig};
use dirtymac::scheme::{run_simulation, SchemeReport, SplitSpec};
use dirtymac::single_letter::{
    capacity_sum, max_binning_rate, upper_convex_envelope, RegionCurve,
};

const TABLE_CAP_ENV: &str = "DIRTYMAC_TABLE_CAP_BITS";
const REGION_RESOLUTION: usize = 256;

#[derive(Parser)]
#[command(name = "dirtymac", version, about = "Coset schemes and rate bounds for the two-user dirty adder channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate capacity, the single-letter maximum, and its concave
    /// envelope over a range of weight budgets (CSV).
    Region {
        #[arg(long, default_value_t = 0.0)]
        q_min: f64,
        #[arg(long, default_value_t = 0.5)]
        q_max: f64,
        /// Number of rows.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the zero-error coset scheme against the channel (JSON report).
    Simulate {
        /// Code file: "n k" header plus one parity-check row per line.
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        q1: f64,
        #[arg(long)]
        q2: f64,
        /// Syndrome bits carried by user 1 (requires --l2).
        #[arg(long)]
        l1: Option<usize>,
        /// Syndrome bits carried by user 2 (requires --l1).
        #[arg(long)]
        l2: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Distributed modulo-two-sum demo over a correlated source pair (CSV).
    Kmdemo {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Modulo-lattice sum-rate estimate for the Gaussian channel (JSON).
    Gaussian {
        /// JSON file with the full parameter set; built-in defaults otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

impl From<dirtymac::Error> for Failure {
    fn from(e: dirtymac::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    code_sha256: Option<String>,
    artifact_version: &'static str,
    outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &'static str, parameters: serde_json::Value) -> Self {
        RunManifest {
            command,
            parameters,
            seed: None,
            code_sha256: None,
            artifact_version: env!("CARGO_PKG_VERSION"),
            outputs: Vec::new(),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap render --help/--version on stdout; everything else is
            // a usage error.
            if e.use_stderr() {
                let _ = e.print();
                std::process::exit(1);
            }
            let _ = e.print();
            return;
        }
    };
    if let Err(failure) = run(cli.command) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Region {
            q_min,
            q_max,
            grid,
            out,
        } => cmd_region(q_min, q_max, grid, &out),
        Command::Simulate {
            code,
            q1,
            q2,
            l1,
            l2,
            trials,
            seed,
            out,
        } => cmd_simulate(&code, q1, q2, l1, l2, trials, seed, &out),
        Command::Kmdemo {
            theta,
            code,
            trials,
            seed,
            out,
        } => cmd_kmdemo(theta, &code, trials, seed, &out),
        Command::Gaussian {
            config,
            seed,
            samples,
            out,
        } => cmd_gaussian(config.as_deref(), seed, samples, &out),
    }
}

fn cmd_region(q_min: f64, q_max: f64, grid: usize, out: &Path) -> Result<(), Failure> {
    if !(0.0..=0.5).contains(&q_min) || !(0.0..=0.5).contains(&q_max) || q_min >= q_max {
        return Err(usage(format!(
            "region needs 0 <= q-min < q-max <= 0.5, got [{q_min}, {q_max}]"
        )));
    }
    if grid < 2 {
        return Err(usage("region needs at least two grid rows"));
    }

    let qs: Vec<f64> = (0..grid)
        .map(|i| q_min + (q_max - q_min) * i as f64 / (grid - 1) as f64)
        .collect();
    let mut capacities = Vec::with_capacity(grid);
    let mut maxima = Vec::with_capacity(grid);
    for &q in &qs {
        capacities.push(capacity_sum(q, q)?);
        maxima.push(max_binning_rate(q, q, REGION_RESOLUTION)?);
    }
    let values: Vec<f64> = maxima.iter().map(|m| m.value).collect();
    let curve = RegionCurve::new(qs.clone(), values)?;
    let enveloped = upper_convex_envelope(&curve)?;

    let mut csv = String::from("q,capacity,fmax,envelope,gap,alpha_opt\n");
    for i in 0..grid {
        let gap = capacities[i] - enveloped.values[i];
        let row = [
            qs[i],
            capacities[i],
            maxima[i].value,
            enveloped.values[i],
            gap,
            maxima[i].alpha1,
        ];
        push_csv_row(&mut csv, &row)?;
    }
    write_artifact(out, &csv)?;

    let mut manifest = RunManifest::new(
        "region",
        serde_json::json!({ "q_min": q_min, "q_max": q_max, "grid": grid }),
    );
    manifest.outputs.push(out.display().to_string());
    write_manifest(out, &manifest)
}

#[derive(Serialize)]
struct SimulateArtifact<'a> {
    code_sha256: &'a str,
    #[serde(flatten)]
    report: &'a SchemeReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    code_path: &Path,
    q1: f64,
    q2: f64,
    l1: Option<usize>,
    l2: Option<usize>,
    trials: u64,
    seed: u64,
    out: &Path,
) -> Result<(), Failure> {
    let (code, sha) = load_code(code_path)?;
    let split = match (l1, l2) {
        (None, None) => None,
        (Some(a), Some(b)) => {
            if a == 0 || b == 0 || a + b != code.redundancy() {
                return Err(usage(format!(
                    "--l1 and --l2 must be positive and sum to n - k = {}",
                    code.redundancy()
                )));
            }
            Some(SplitSpec::new(a, b)?)
        }
        _ => return Err(usage("provide both --l1 and --l2, or neither")),
    };

    let cfg = ChannelConfig::new(code.n(), q1, q2, seed)?;
    let report = run_simulation(&cfg, &code, split.as_ref(), trials)?;

    let artifact = SimulateArtifact {
        code_sha256: &sha,
        report: &report,
    };
    let json = to_checked_json(&artifact)?;
    write_artifact(out, &json)?;

    let mut parameters = serde_json::json!({
        "code": code_path.display().to_string(),
        "q1": q1,
        "q2": q2,
        "trials": trials,
    });
    if let (Some(a), Some(b)) = (l1, l2) {
        parameters["l1"] = a.into();
        parameters["l2"] = b.into();
    }
    let mut manifest = RunManifest::new("simulate", parameters);
    manifest.seed = Some(seed);
    manifest.code_sha256 = Some(sha);
    manifest.outputs.push(out.display().to_string());
    write_manifest(out, &manifest)?;

    if report.decode_errors > 0 {
        return Err(internal(format!(
            "{} of {} trials failed to decode",
            report.decode_errors, report.trials
        )));
    }
    Ok(())
}

fn cmd_kmdemo(
    theta: f64,
    code_path: &Path,
    trials: u64,
    seed: u64,
    out: &Path,
) -> Result<(), Failure> {
    let (code, sha) = load_code(code_path)?;
    let cfg = KmSourceConfig::new(code.n(), theta, seed)?;
    let report = km_scheme_demo(&cfg, &code, trials)?;

    let mut csv = String::from("theta,km_bound,sw_bound,gap,empirical_error_rate,code_rate\n");
    push_csv_row(
        &mut csv,
        &[
            report.theta,
            report.km_bound,
            report.sw_bound,
            report.sw_bound - report.km_bound,
            report.empirical_error_rate,
            report.rate_per_encoder.as_f64(),
        ],
    )?;
    write_artifact(out, &csv)?;

    let mut manifest = RunManifest::new(
        "kmdemo",
        serde_json::json!({
            "theta": theta,
            "code": code_path.display().to_string(),
            "trials": trials,
        }),
    );
    manifest.seed = Some(seed);
    manifest.code_sha256 = Some(sha);
    manifest.outputs.push(out.display().to_string());
    write_manifest(out, &manifest)
}

#[derive(Serialize)]
struct GaussianArtifact {
    config: GaussianConfig,
    capacity_bits: f64,
    estimate_bits: f64,
    std_error_bits: f64,
    gap_bits: f64,
    calibration_residual_bits: f64,
    delta: [f64; 2],
    terms: dirtymac::gaussian::EntropyTerms,
    constraint_mean_square: [f64; 2],
    rng: &'static str,
}

fn default_gaussian_config() -> GaussianConfig {
    GaussianConfig {
        power1: 1.0,
        power2: 1.0,
        noise: 1e-3,
        interference1: 1e6,
        interference2: 1e6,
        samples: 100_000,
        seed: 1,
    }
}

fn cmd_gaussian(
    config_path: Option<&Path>,
    seed: Option<u64>,
    samples: Option<usize>,
    out: &Path,
) -> Result<(), Failure> {
    let mut cfg = match config_path {
        None => default_gaussian_config(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure {
                code: 2,
                message: format!("invalid config {}: {e}", path.display()),
            })?
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = samples {
        cfg.samples = n;
    }

    let report = mod_delta_sum_rate_estimate(&cfg)?;
    let calibration = gaussian_calibration_residual_bits(cfg.samples, cfg.seed)?;
    let artifact = GaussianArtifact {
        config: report.config,
        capacity_bits: report.capacity_bits,
        estimate_bits: report.estimate_bits,
        std_error_bits: report.std_error_bits,
        gap_bits: report.gap_bits,
        calibration_residual_bits: calibration,
        delta: report.delta,
        terms: report.estimate.terms,
        constraint_mean_square: report.estimate.constraint_mean_square,
        rng: report.rng,
    };
    let json = to_checked_json(&artifact)?;
    write_artifact(out, &json)?;

    let mut manifest = RunManifest::new(
        "gaussian",
        serde_json::to_value(cfg).map_err(|e| internal(e.to_string()))?,
    );
    manifest.seed = Some(cfg.seed);
    manifest.outputs.push(out.display().to_string());
    write_manifest(out, &manifest)
}

fn table_cap_from_env() -> Result<u64, Failure> {
    match std::env::var(TABLE_CAP_ENV) {
        Err(_) => Ok(DEFAULT_TABLE_CAP_BITS),
        Ok(text) => text.parse().map_err(|_| Failure {
            code: 2,
            message: format!("{TABLE_CAP_ENV} must be an integer bit budget, got {text:?}"),
        }),
    }
}

fn load_code(path: &Path) -> Result<(LinearCode, String), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let code = parse_code_file_with_cap(&text, table_cap_from_env()?)?;
    let sha = hex::encode(Sha256::digest(text.as_bytes()));
    Ok((code, sha))
}

fn push_csv_row(csv: &mut String, values: &[f64]) -> Result<(), Failure> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(internal(format!("non-finite value in CSV column {i}")));
        }
        if i > 0 {
            csv.push(',');
        }
        let _ = write!(csv, "{v:.6}");
    }
    csv.push('\n');
    Ok(())
}

/// Serializes to pretty JSON after checking that no non-finite number got
/// mapped to `null` on the way.
fn to_checked_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let v = serde_json::to_value(value).map_err(|e| internal(e.to_string()))?;
    fn has_null(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Null => true,
            serde_json::Value::Array(items) => items.iter().any(has_null),
            serde_json::Value::Object(map) => map.values().any(has_null),
            _ => false,
        }
    }
    if has_null(&v) {
        return Err(internal("non-finite value in JSON report"));
    }
    serde_json::to_string_pretty(&v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| internal(e.to_string()))
}

fn write_artifact(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn write_manifest(out: &Path, manifest: &RunManifest) -> Result<(), Failure> {
    let path = manifest_path(out);
    let json = to_checked_json(manifest)?;
    fs::write(&path, json)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
