//! Command-line front end for the chiral two-level Bloch model.

mod commands;
mod config;
mod output;

use std::io;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{
    CommonArgs, DeltaZArgs, DeltaZConfig, PurityScanArgs, PurityScanConfig, SolveArgs, SolveConfig, TmaxConfig,
    ValidateArgs, ValidateConfig,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] chiral_bloch::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            // Parameters are validated up front, so anything left is a failed computation.
            CliError::Model(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "chiral-bloch", version, about = "Dephasing dynamics of a chiral two-level system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bloch vector and purity over time for one initial state
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        extra: SolveArgs,
    },
    /// Z difference between a pure state and its dephased partner
    DeltaZ {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        extra: DeltaZArgs,
    },
    /// Time of the largest Z difference for each dephasing rate
    Tmax {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Purity over the disk of initial states
    PurityScan {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        extra: PurityScanArgs,
    },
    /// Check the closed form against RK4 on random cases
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        extra: ValidateArgs,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Solve { common, extra } => {
            let file = config::load(common.config.as_deref())?;
            commands::solve(&SolveConfig::resolve(&common, &extra, &file)?, &mut out)?;
        }
        Command::DeltaZ { common, extra } => {
            let file = config::load(common.config.as_deref())?;
            commands::delta_z_cmd(&DeltaZConfig::resolve(&common, &extra, &file)?, &mut out)?;
        }
        Command::Tmax { common } => {
            let file = config::load(common.config.as_deref())?;
            commands::tmax(&TmaxConfig::resolve(&common, &file)?, &mut out)?;
        }
        Command::PurityScan { common, extra } => {
            let file = config::load(common.config.as_deref())?;
            commands::purity_scan(&PurityScanConfig::resolve(&common, &extra, &file)?, &mut out)?;
        }
        Command::Validate { common, extra } => {
            let file = config::load(common.config.as_deref())?;
            return commands::validate(&ValidateConfig::resolve(&common, &extra, &file)?, &mut out);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
