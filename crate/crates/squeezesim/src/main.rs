use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use squeezesim::{run_scenario, write_files, CliError, ExperimentConfig, RunOptions, Scenario};

#[derive(Parser, Debug)]
#[command(
    name = "squeezesim",
    version,
    about = "Squeezed-light optomechanical noise budget"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct CommonArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory for CSV output.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Write CSV files into the output directory.
    #[arg(long)]
    csv: bool,
    /// Drop detector dark noise from all results.
    #[arg(long)]
    no_dark: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homodyne arc of the squeezed state over the LO phase.
    Characterize(CommonArgs),
    /// Transduced spectra for coherent and squeezed probing.
    Spectrum(CommonArgs),
    /// Imprecision/back-action trade-off and SQL optimum.
    Sql(CommonArgs),
    /// Per-stage squeezing loss ledger.
    Budget(CommonArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (scenario, args) = match cli.command {
        Command::Characterize(a) => (Scenario::Characterize, a),
        Command::Spectrum(a) => (Scenario::Spectrum, a),
        Command::Sql(a) => (Scenario::Sql, a),
        Command::Budget(a) => (Scenario::Budget, a),
    };
    let exp = ExperimentConfig::from_path(&args.config)?.validate()?;
    let opts = RunOptions {
        no_dark: args.no_dark,
    };
    let output = run_scenario(scenario, &exp, opts)?;
    print!("{}", output.console);
    if args.csv {
        for path in write_files(&args.out, &output.files)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("squeezesim {}", env!("CARGO_PKG_VERSION"));
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
