//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical failure (including a requested state that is not bound).

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{cmd_compare, cmd_degeneracy, cmd_spectrum, cmd_wavefunction};
pub use config::{Command, RunConfig, Settings};
pub use table::Table;
pub use verify::cmd_verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            E::InvalidParameter { .. } | E::OutOfRange(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Usage(e.0)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hulthen",
    version,
    about = "Bound states of the D-dimensional Hulthén potential",
    long_about = "Bound states of the D-dimensional Hulthén potential under the exponential \
                  centrifugal approximation: closed-form spectra, radial wavefunctions, a \
                  verification suite and comparisons against a finite-difference eigensolver.\n\n\
                  The default quadrature tolerance can be set with the HULTHEN_TOL environment \
                  variable; --tol overrides it."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Closed-form energies of every bound (n, l) on the requested ranges
    Spectrum(Settings),
    /// Sample a normalized radial wavefunction R(r)
    Wavefunction(Settings),
    /// Run the verification suites; exit 1 if any fails
    Verify(Settings),
    /// Closed forms (c0 and c0 = 0) against the finite-difference oracle
    Compare(Settings),
    /// Interdimensional degeneracy pairs (n, l, D) <-> (n, l+1, D-2)
    Degeneracy(Settings),
}

impl Sub {
    pub fn split(self) -> (Command, Settings) {
        match self {
            Sub::Spectrum(s) => (Command::Spectrum, s),
            Sub::Wavefunction(s) => (Command::Wavefunction, s),
            Sub::Verify(s) => (Command::Verify, s),
            Sub::Compare(s) => (Command::Compare, s),
            Sub::Degeneracy(s) => (Command::Degeneracy, s),
        }
    }
}

/// Flags merged over the optional config file, then resolved.
pub fn resolve(command: Command, flags: Settings) -> Result<RunConfig, CliError> {
    let settings = match &flags.config {
        Some(path) => {
            let file = config::read_config_file(path)?;
            flags.over(file)
        }
        None => flags,
    };
    Ok(RunConfig::resolve(command, settings, config::default_tol()?)?)
}

/// Table and pass flag for a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<(Table, bool), CliError> {
    Ok(match cfg.command {
        Command::Spectrum => (cmd_spectrum(cfg)?, true),
        Command::Wavefunction => (cmd_wavefunction(cfg)?, true),
        Command::Compare => (cmd_compare(cfg)?, true),
        Command::Degeneracy => (cmd_degeneracy(cfg)?, true),
        Command::Verify => cmd_verify(cfg),
    })
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write `{}`: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Usage(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn run_parsed(cli: Cli) -> Result<i32, CliError> {
    let (command, flags) = cli.command.split();
    let cfg = resolve(command, flags)?;
    let (table, passed) = execute(&cfg)?;
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    emit(&cfg, &table.render(&cfg))?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_parsed(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
