//! Command-line noise budget for squeezed-light optomechanical sensing.
//!
//! The numerics live in `squeezesim-core`; this crate adds the JSON experiment
//! config, the four scenarios (`characterize`, `spectrum`, `sql`, `budget`),
//! CSV output and a parallel frequency sweep.

pub mod budget;
pub mod config;
pub mod scenarios;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{ConfigError, Experiment, ExperimentConfig, RunOptions, SqueezingReference};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(#[from] squeezesim_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 2 for config validation, 3 for numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Characterize,
    Spectrum,
    Sql,
    Budget,
}

/// Console text plus the CSV files (name, contents) a scenario produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub console: String,
    pub files: Vec<(&'static str, String)>,
}

pub fn run_scenario(
    scenario: Scenario,
    exp: &Experiment,
    opts: RunOptions,
) -> Result<Output, CliError> {
    let out = match scenario {
        Scenario::Characterize => {
            let r = scenarios::run_characterize(exp, opts)?;
            Output {
                console: r.to_console(),
                files: vec![("characterize.csv", r.to_csv())],
            }
        }
        Scenario::Spectrum => {
            let r = scenarios::run_spectrum(exp, opts, sweep::thread_cap())?;
            Output {
                console: r.to_console(),
                files: vec![
                    (
                        "spectrum_coherent.csv",
                        scenarios::spectrum_csv(&r.coherent),
                    ),
                    (
                        "spectrum_squeezed.csv",
                        scenarios::spectrum_csv(&r.squeezed),
                    ),
                ],
            }
        }
        Scenario::Sql => {
            let r = scenarios::run_sql(exp)?;
            Output {
                console: r.to_console(),
                files: vec![("sql.csv", r.to_csv())],
            }
        }
        Scenario::Budget => {
            let r = scenarios::run_budget(exp, opts);
            Output {
                console: r.to_console(),
                files: vec![("budget.csv", r.to_csv())],
            }
        }
    };
    Ok(out)
}

pub fn write_files(dir: &Path, files: &[(&'static str, String)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    files
        .iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        })
        .collect()
}
