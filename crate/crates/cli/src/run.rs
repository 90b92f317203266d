//! Declarative experiment runs: load a JSON config, cut the circuit, run
//! the estimators and render rows as CSV or JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qknit::circuit::{builtin, parse_circuit, partition, Circuit, CutMethod, CutSpec, BUILTIN_NAMES};
use qknit::estimator::{assign_qpds, estimate_exact, estimate_mc, simulate_uncut, EstimateReport, Observable};
use qknit::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Exact,
    MonteCarlo,
    Both,
}

fn default_factory_size() -> usize {
    1
}
fn default_mode() -> RunMode {
    RunMode::Both
}
fn default_shots() -> u64 {
    10_000
}
fn default_repetitions() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Built-in circuit name; `ghz` takes its size from `n` (or `ghz4`).
    #[serde(default)]
    pub circuit: Option<String>,
    /// Circuit JSON file, relative to the config file.
    #[serde(default)]
    pub circuit_path: Option<PathBuf>,
    #[serde(default)]
    pub n: Option<usize>,
    pub cut_ids: Vec<String>,
    pub method: CutMethod,
    #[serde(default = "default_factory_size")]
    pub factory_size: usize,
    #[serde(default)]
    pub grouping: Vec<Vec<String>>,
    /// Pauli terms; defaults to `Z` on every qubit.
    #[serde(default)]
    pub observable: Option<Vec<(f64, String)>>,
    #[serde(default = "default_mode")]
    pub mode: RunMode,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Output file, relative to the working directory; stdout when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// Configuration problem, reported with the offending field.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field_error(field: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("config field `{field}`: {msg}"))
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))?;
        if let (Some(p), Some(dir)) = (&cfg.circuit_path, path.parent()) {
            if p.is_relative() {
                cfg.circuit_path = Some(dir.join(p));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match (&self.circuit, &self.circuit_path) {
            (Some(_), Some(_)) => return Err(field_error("circuit", "give either `circuit` or `circuit_path`, not both")),
            (None, None) => return Err(field_error("circuit", "one of `circuit` or `circuit_path` is required")),
            (None, Some(p)) if !p.is_file() => return Err(field_error("circuit_path", format!("file not found: {}", p.display()))),
            _ => {}
        }
        if self.n == Some(0) {
            return Err(field_error("n", "must be at least 1"));
        }
        if self.shots == 0 && self.mode != RunMode::Exact {
            return Err(field_error("shots", "must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(field_error("repetitions", "must be at least 1"));
        }
        if self.factory_size == 0 {
            return Err(field_error("factory_size", "must be at least 1"));
        }
        Ok(())
    }

    /// Canonical JSON of the resolved config, hashed into output headers.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    fn load_circuit(&self) -> Result<Circuit, ConfigError> {
        if let Some(p) = &self.circuit_path {
            let text = std::fs::read_to_string(p).map_err(|e| field_error("circuit_path", format!("cannot read {}: {e}", p.display())))?;
            return parse_circuit(&text).map_err(|e| field_error("circuit_path", format!("{}: {e}", p.display())));
        }
        let name = self.circuit.as_deref().expect("validated");
        let (base, n) = match name.strip_prefix("ghz").filter(|s| !s.is_empty()) {
            Some(digits) => (
                "ghz",
                Some(digits.parse::<usize>().map_err(|_| field_error("circuit", format!("unknown builtin {name:?}")))?),
            ),
            None => (name, self.n),
        };
        if !BUILTIN_NAMES.contains(&base) {
            return Err(field_error("circuit", format!("unknown builtin {name:?}; expected one of {BUILTIN_NAMES:?}")));
        }
        builtin(base, n).map_err(|e| field_error("circuit", e))
    }

    fn cut_spec(&self) -> CutSpec {
        CutSpec {
            cut_ids: self.cut_ids.clone(),
            method: self.method,
            factory_size: self.factory_size,
            grouping: self.grouping.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub method: String,
    pub n: usize,
    /// Expectation of the uncut circuit.
    pub exact_value: f64,
    #[serde(flatten)]
    pub report: EstimateReport,
}

pub struct RunOutput {
    pub config_hash: String,
    pub seed: u64,
    pub rows: Vec<RunRow>,
}

/// Error raised while executing a valid config.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Estimator(Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => e.fmt(f),
            RunError::Estimator(e) => e.fmt(f),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput, RunError> {
    let circuit = cfg.load_circuit()?;
    let obs = match &cfg.observable {
        Some(terms) => Observable::new(terms.clone()).map_err(|e| field_error("observable", e))?,
        None => Observable::z_on(circuit.n_qubits, &(0..circuit.n_qubits).collect::<Vec<_>>()),
    };
    let p = partition(&circuit, &cfg.cut_spec()).map_err(|e| field_error("cut_ids", e))?;
    let qpds = assign_qpds(&p).map_err(|e| field_error("method", e))?;
    let reference = simulate_uncut(&circuit, &obs).map_err(|e| field_error("observable", e))?;
    let n_cuts = cfg.cut_ids.len();
    let row = |report: EstimateReport| RunRow {
        method: cfg.method.label().to_string(),
        n: n_cuts,
        exact_value: reference,
        report,
    };
    let mut rows = Vec::new();
    if cfg.mode != RunMode::MonteCarlo {
        rows.push(row(estimate_exact(&p, &qpds, &obs).map_err(RunError::Estimator)?));
    }
    if cfg.mode != RunMode::Exact {
        for r in 0..cfg.repetitions as u64 {
            let seed = cfg.seed.wrapping_add(r);
            rows.push(row(estimate_mc(&p, &qpds, &obs, cfg.shots, seed).map_err(RunError::Estimator)?));
        }
    }
    Ok(RunOutput {
        config_hash: cfg.hash(),
        seed: cfg.seed,
        rows,
    })
}

pub const CSV_COLUMNS: &str = "method,n,mode,shots,seed,value,exact_value,variance,std_error,kappa,predicted_variance_bound";

pub fn render_csv(out: &RunOutput, timestamp: Option<u64>) -> String {
    let mut s = format!("# qknit run config_sha256={} seed={}\n", out.config_hash, out.seed);
    if let Some(t) = timestamp {
        let _ = writeln!(s, "# generated_unix={t}");
    }
    s.push_str(CSV_COLUMNS);
    s.push('\n');
    for r in &out.rows {
        let e = &r.report;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.method,
            r.n,
            e.mode.label(),
            e.shots,
            e.seed,
            e.value,
            r.exact_value,
            e.empirical_variance,
            e.std_error,
            e.kappa,
            e.predicted_variance_bound
        );
    }
    s
}

pub fn render_json(out: &RunOutput, timestamp: Option<u64>) -> String {
    let mut v = serde_json::json!({
        "config_sha256": out.config_hash,
        "seed": out.seed,
        "rows": out.rows,
    });
    if let Some(t) = timestamp {
        v["generated_unix"] = t.into();
    }
    serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
}
