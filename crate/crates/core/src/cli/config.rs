//! Run configuration: flag/file settings and their resolution into a
//! validated [`RunConfig`].
//!
//! The optional config file is plain text, one `key = value` per line:
//!
//! ```text
//! # sweep for the report
//! alpha = 0.025, 0.05, 0.1
//! D = 3, 4, 5
//! lmax = 2
//! format = json
//! ```
//!
//! Blank lines and `#` comments are ignored. Keys are case-insensitive and
//! accept `-` or `_`; unknown and repeated keys are errors. Command-line
//! flags override values from the file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::model::{PhysicalParams, C0_DEFAULT};
use crate::oracle::{DEFAULT_POINTS, MIN_POINTS};
use crate::qrule::DEFAULT_QUAD_TOL;

/// Environment variable overriding the default quadrature tolerance.
pub const TOL_ENV: &str = "HULTHEN_TOL";

/// Largest n range a single run will enumerate.
pub const MAX_STATES_PER_L: u32 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    Wavefunction,
    Verify,
    Compare,
    Degeneracy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wavefunction => "wavefunction",
            Command::Verify => "verify",
            Command::Compare => "compare",
            Command::Degeneracy => "degeneracy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// ħ = 1, μ = 1/2, e² = 1
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Suite {
    Vieta,
    Riccati,
    Nodes,
    Jacobi,
    QuantumCondition,
    QuantumCorrection,
    MomentumIntegral,
    Quantization,
    Appendix,
    Normalization,
    Orthogonality,
    Degeneracy,
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Vieta,
        Suite::Riccati,
        Suite::Nodes,
        Suite::Jacobi,
        Suite::QuantumCondition,
        Suite::QuantumCorrection,
        Suite::MomentumIntegral,
        Suite::Quantization,
        Suite::Appendix,
        Suite::Normalization,
        Suite::Orthogonality,
        Suite::Degeneracy,
        Suite::Limits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Vieta => "vieta",
            Suite::Riccati => "riccati",
            Suite::Nodes => "nodes",
            Suite::Jacobi => "jacobi",
            Suite::QuantumCondition => "quantum_condition",
            Suite::QuantumCorrection => "quantum_correction",
            Suite::MomentumIntegral => "momentum_integral",
            Suite::Quantization => "quantization",
            Suite::Appendix => "appendix",
            Suite::Normalization => "normalization",
            Suite::Orthogonality => "orthogonality",
            Suite::Degeneracy => "degeneracy",
            Suite::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum CompareMode {
    ClosedC0,
    ClosedC0zero,
    OracleApprox,
    OracleExact,
}

impl CompareMode {
    pub const ALL: [CompareMode; 4] = [
        CompareMode::ClosedC0,
        CompareMode::ClosedC0zero,
        CompareMode::OracleApprox,
        CompareMode::OracleExact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CompareMode::ClosedC0 => "closed_c0",
            CompareMode::ClosedC0zero => "closed_c0zero",
            CompareMode::OracleApprox => "oracle_approx",
            CompareMode::OracleExact => "oracle_exact",
        }
    }
}

/// A finite float (rejects `nan`, `inf`).
pub fn parse_finite(s: &str) -> Result<f64, String> {
    let v = f64::from_str(s.trim()).map_err(|e| format!("`{s}`: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

/// Comma-separated list of finite floats; empty entries are rejected.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>, ConfigError> {
    parse_list(s, parse_finite)
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return err(format!("empty entry in list `{s}`"));
        }
        out.push(item(part).map_err(ConfigError)?);
    }
    Ok(out)
}

fn parse_scalar<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| format!("`{s}`: {e}"))
}

fn parse_enum<T: ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s.trim(), true)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

/// Everything that can come from flags or the config file. `None` means
/// "not given here".
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Settings {
    /// Screening parameter(s), comma-separated
    #[arg(long, value_delimiter = ',', value_parser = parse_finite)]
    pub alpha: Option<Vec<f64>>,
    /// Spatial dimension(s), comma-separated
    #[arg(long = "D", visible_alias = "dim", value_delimiter = ',')]
    pub dims: Option<Vec<u32>>,
    /// Centrifugal constant c0 of the exponential approximation
    #[arg(long, value_parser = parse_finite)]
    pub c0: Option<f64>,
    /// Unit preset; `paper` fixes ħ = 1, μ = 1/2, e² = 1
    #[arg(long, value_enum)]
    pub units: Option<Units>,
    /// Nuclear charge Z
    #[arg(long = "Z", value_parser = parse_finite)]
    pub z: Option<f64>,
    #[arg(long, value_parser = parse_finite)]
    pub mu: Option<f64>,
    #[arg(long, value_parser = parse_finite)]
    pub hbar: Option<f64>,
    #[arg(long, value_parser = parse_finite)]
    pub e2: Option<f64>,
    /// Largest radial quantum number
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Largest angular quantum number
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Radial quantum number (wavefunction)
    #[arg(long)]
    pub n: Option<u32>,
    /// Angular quantum number (wavefunction)
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Aligned human-readable table instead of CSV/JSON
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_parser = parse_bool)]
    pub pretty: Option<bool>,
    /// Verification suite(s) to run
    #[arg(long = "suite", value_enum, value_delimiter = ',')]
    pub suites: Option<Vec<Suite>>,
    /// Energies to compare
    #[arg(long, value_enum, value_delimiter = ',')]
    pub modes: Option<Vec<CompareMode>>,
    /// Seed for the randomized checks
    #[arg(long)]
    pub seed: Option<u64>,
    /// Finite-difference grid points
    #[arg(long = "grid-m")]
    pub grid_m: Option<usize>,
    /// Finite-difference box size
    #[arg(long = "r-max", value_parser = parse_finite)]
    pub r_max: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, value_parser = parse_finite)]
    pub tol: Option<f64>,
    /// Number of wavefunction samples
    #[arg(long)]
    pub points: Option<usize>,
    /// Last sampled radius
    #[arg(long = "r-end", value_parser = parse_finite)]
    pub r_end: Option<f64>,
    /// Read settings from a `key = value` file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sensitivity canary: scales c0 on one side of dual-route checks
    #[arg(long = "perturb-c0", hide = true, value_parser = parse_finite)]
    pub perturb_c0: Option<f64>,
}

macro_rules! set_once {
    ($slot:expr, $key:expr, $value:expr) => {{
        if $slot.is_some() {
            return err(format!("duplicate key `{}`", $key));
        }
        $slot = Some($value);
    }};
}

impl Settings {
    /// Parses the text of a config file.
    pub fn parse_file(text: &str) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {lineno}: expected `key = value`")))?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            let value = value.trim();
            if value.is_empty() {
                return err(format!("line {lineno}: missing value for `{key}`"));
            }
            s.set(&key, value)
                .map_err(|e| ConfigError(format!("line {lineno}: {e}")))?;
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let one = |r: Result<f64, String>| r.map_err(ConfigError);
        match key {
            "alpha" => set_once!(self.alpha, key, parse_float_list(v)?),
            "d" | "dim" => set_once!(self.dims, key, parse_list(v, parse_scalar::<u32>)?),
            "c0" => set_once!(self.c0, key, one(parse_finite(v))?),
            "units" => set_once!(self.units, key, parse_enum(v).map_err(ConfigError)?),
            "z" => set_once!(self.z, key, one(parse_finite(v))?),
            "mu" => set_once!(self.mu, key, one(parse_finite(v))?),
            "hbar" => set_once!(self.hbar, key, one(parse_finite(v))?),
            "e2" => set_once!(self.e2, key, one(parse_finite(v))?),
            "nmax" => set_once!(self.nmax, key, parse_scalar(v).map_err(ConfigError)?),
            "lmax" => set_once!(self.lmax, key, parse_scalar(v).map_err(ConfigError)?),
            "n" => set_once!(self.n, key, parse_scalar(v).map_err(ConfigError)?),
            "l" => set_once!(self.l, key, parse_scalar(v).map_err(ConfigError)?),
            "format" => set_once!(self.format, key, parse_enum(v).map_err(ConfigError)?),
            "out" => set_once!(self.out, key, PathBuf::from(v)),
            "pretty" => set_once!(self.pretty, key, parse_bool(v).map_err(ConfigError)?),
            "suite" | "suites" => set_once!(self.suites, key, parse_list(v, parse_enum)?),
            "modes" => set_once!(self.modes, key, parse_list(v, parse_enum)?),
            "seed" => set_once!(self.seed, key, parse_scalar(v).map_err(ConfigError)?),
            "grid_m" => set_once!(self.grid_m, key, parse_scalar(v).map_err(ConfigError)?),
            "r_max" => set_once!(self.r_max, key, one(parse_finite(v))?),
            "tol" => set_once!(self.tol, key, one(parse_finite(v))?),
            "points" => set_once!(self.points, key, parse_scalar(v).map_err(ConfigError)?),
            "r_end" => set_once!(self.r_end, key, one(parse_finite(v))?),
            other => return err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// `self` wins over `base` field by field.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            alpha: self.alpha.or(base.alpha),
            dims: self.dims.or(base.dims),
            c0: self.c0.or(base.c0),
            units: self.units.or(base.units),
            z: self.z.or(base.z),
            mu: self.mu.or(base.mu),
            hbar: self.hbar.or(base.hbar),
            e2: self.e2.or(base.e2),
            nmax: self.nmax.or(base.nmax),
            lmax: self.lmax.or(base.lmax),
            n: self.n.or(base.n),
            l: self.l.or(base.l),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            pretty: self.pretty.or(base.pretty),
            suites: self.suites.or(base.suites),
            modes: self.modes.or(base.modes),
            seed: self.seed.or(base.seed),
            grid_m: self.grid_m.or(base.grid_m),
            r_max: self.r_max.or(base.r_max),
            tol: self.tol.or(base.tol),
            points: self.points.or(base.points),
            r_end: self.r_end.or(base.r_end),
            config: self.config.or(base.config),
            perturb_c0: self.perturb_c0.or(base.perturb_c0),
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<Settings, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config `{}`: {e}", path.display())))?;
    Settings::parse_file(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
}

/// Default tolerance: `HULTHEN_TOL` if set and valid, else 1e-12.
pub fn default_tol() -> Result<f64, ConfigError> {
    match std::env::var(TOL_ENV) {
        Ok(v) => {
            let t = parse_finite(&v).map_err(|e| ConfigError(format!("{TOL_ENV}: {e}")))?;
            check_tol(t).map_err(|e| ConfigError(format!("{TOL_ENV}: {e}")))
        }
        Err(_) => Ok(DEFAULT_QUAD_TOL),
    }
}

fn check_tol(t: f64) -> Result<f64, ConfigError> {
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        err(format!("tolerance must lie in (0, 1), got {t}"))
    }
}

/// Fully resolved, validated configuration of one run. Serialized verbatim
/// into the JSON `meta.config`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub alpha: Vec<f64>,
    pub dims: Vec<u32>,
    pub c0: f64,
    pub units: Option<Units>,
    pub z: f64,
    pub mu: f64,
    pub hbar: f64,
    pub e2: f64,
    /// `None`: every bound n (spectrum only)
    pub nmax: Option<u32>,
    pub lmax: u32,
    pub n: u32,
    pub l: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub pretty: bool,
    pub suites: Vec<Suite>,
    pub modes: Vec<CompareMode>,
    pub seed: u64,
    pub grid_m: usize,
    pub r_max: Option<f64>,
    pub tol: f64,
    pub points: usize,
    pub r_end: Option<f64>,
    pub perturb_c0: f64,
}

struct CommandDefaults {
    alpha: &'static [f64],
    dims: &'static [u32],
    nmax: Option<u32>,
    lmax: u32,
    format: Format,
}

fn defaults_for(cmd: Command) -> CommandDefaults {
    match cmd {
        Command::Spectrum => CommandDefaults {
            alpha: &[0.1],
            dims: &[3],
            nmax: None,
            lmax: 2,
            format: Format::Csv,
        },
        Command::Wavefunction => CommandDefaults {
            alpha: &[0.2],
            dims: &[3],
            nmax: None,
            lmax: 0,
            format: Format::Csv,
        },
        Command::Verify => CommandDefaults {
            alpha: &[0.025, 0.05, 0.1],
            dims: &[3, 4, 5],
            nmax: Some(5),
            lmax: 3,
            format: Format::Json,
        },
        Command::Compare => CommandDefaults {
            alpha: &[0.025, 0.05],
            dims: &[3],
            nmax: Some(1),
            lmax: 2,
            format: Format::Csv,
        },
        Command::Degeneracy => CommandDefaults {
            alpha: &[0.1],
            dims: &[3, 4, 5],
            nmax: Some(2),
            lmax: 2,
            format: Format::Csv,
        },
    }
}

fn sorted_unique<T: Copy + PartialOrd>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    v.dedup();
    v
}

impl RunConfig {
    /// Applies command defaults and validates every field.
    pub fn resolve(command: Command, s: Settings, default_tol: f64) -> Result<RunConfig, ConfigError> {
        let d = defaults_for(command);
        if s.units == Some(Units::Paper) && (s.mu.is_some() || s.hbar.is_some() || s.e2.is_some()) {
            return err("--units paper fixes hbar, mu and e2; drop the explicit values or the preset");
        }
        let alpha = sorted_unique(s.alpha.unwrap_or_else(|| d.alpha.to_vec()));
        let dims = sorted_unique(s.dims.unwrap_or_else(|| d.dims.to_vec()));
        if alpha.is_empty() || dims.is_empty() {
            return err("alpha and D lists must not be empty");
        }
        if command == Command::Wavefunction && (alpha.len() > 1 || dims.len() > 1) {
            return err("wavefunction takes a single alpha and a single D");
        }
        let cfg = RunConfig {
            command,
            alpha,
            dims,
            c0: s.c0.unwrap_or(C0_DEFAULT),
            units: s.units,
            z: s.z.unwrap_or(1.0),
            mu: s.mu.unwrap_or(0.5),
            hbar: s.hbar.unwrap_or(1.0),
            e2: s.e2.unwrap_or(1.0),
            nmax: s.nmax.or(d.nmax),
            lmax: s.lmax.unwrap_or(d.lmax),
            n: s.n.unwrap_or(0),
            l: s.l.unwrap_or(0),
            format: s.format.unwrap_or(d.format),
            out: s.out,
            pretty: s.pretty.unwrap_or(false),
            suites: sorted_unique(s.suites.unwrap_or_else(|| Suite::ALL.to_vec())),
            modes: sorted_unique(s.modes.unwrap_or_else(|| CompareMode::ALL.to_vec())),
            seed: s.seed.unwrap_or(0),
            grid_m: s.grid_m.unwrap_or(DEFAULT_POINTS),
            r_max: s.r_max,
            tol: check_tol(s.tol.unwrap_or(default_tol))?,
            points: s.points.unwrap_or(2000),
            r_end: s.r_end,
            perturb_c0: s.perturb_c0.unwrap_or(1.0),
        };
        for &a in &cfg.alpha {
            cfg.params(a, cfg.dims[0])
                .validate()
                .map_err(|e| ConfigError(e.to_string()))?;
        }
        for &dim in &cfg.dims {
            cfg.params(cfg.alpha[0], dim)
                .validate()
                .map_err(|e| ConfigError(e.to_string()))?;
        }
        if cfg.nmax.is_some_and(|n| n >= MAX_STATES_PER_L) || cfg.lmax >= MAX_STATES_PER_L {
            return err(format!("nmax and lmax must be below {MAX_STATES_PER_L}"));
        }
        if cfg.grid_m < MIN_POINTS {
            return err(format!("grid-m must be at least {MIN_POINTS}"));
        }
        if cfg.r_max.is_some_and(|r| r <= 0.0) || cfg.r_end.is_some_and(|r| r <= 0.0) {
            return err("r-max and r-end must be positive");
        }
        if cfg.points < 2 || cfg.points > 10_000_000 {
            return err("points must lie in [2, 10000000]");
        }
        if !(cfg.perturb_c0 > 0.0) {
            return err("perturb-c0 must be positive");
        }
        if cfg.modes.is_empty() || cfg.suites.is_empty() {
            return err("mode and suite lists must not be empty");
        }
        Ok(cfg)
    }

    pub fn params(&self, alpha: f64, dim: u32) -> PhysicalParams {
        PhysicalParams {
            alpha,
            z: self.z,
            mu: self.mu,
            hbar: self.hbar,
            e2: self.e2,
            dim,
            c0: self.c0,
        }
    }
}
