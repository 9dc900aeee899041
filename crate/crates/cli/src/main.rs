//! `horn-inverse`: forward synthesis, inversion and acceptance runs.
//!
//! Exit status: 0 unique result, 3 parameter family or contradicted side
//! information, 1 error or failed verification.

mod config;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use horn_inverse::area_reconstruction::Scenario;
use horn_inverse::forward::ObservableKind;

use config::{Mode, RunConfig};

const EXIT_NONUNIQUE: u8 = 3;

#[derive(Parser)]
#[command(name = "horn-inverse", version, about = "Area function of an acoustic duct from frequency-domain data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize observables from an area profile
    Forward {
        #[command(flatten)]
        common: Common,
        /// Only this observable
        #[arg(long, value_name = "NAME")]
        kind: Option<ObservableKind>,
    },
    /// Reconstruct the area from one spectral CSV
    Invert {
        #[command(flatten)]
        common: Common,
        /// Expected kind of the data file
        #[arg(long, value_name = "NAME")]
        kind: Option<ObservableKind>,
        /// Inversion scenario; inferred from the data kind when omitted
        #[arg(long, value_name = "NAME")]
        scenario: Option<Scenario>,
        /// Spectral CSV; overrides "data" in the configuration
        data: Option<PathBuf>,
    },
    /// Write the reference duct's observables and profiles
    Example {
        #[command(flatten)]
        common: Common,
        /// Only this observable
        #[arg(long, value_name = "NAME")]
        kind: Option<ObservableKind>,
    },
    /// Run the acceptance criteria
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common, mode: Mode) -> Result<RunConfig> {
    let cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.check_mode(mode)?;
    Ok(cfg)
}

fn out_dir(common: &Common) -> &Path {
    common.out.as_deref().unwrap_or(Path::new("out"))
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Forward { common, kind } => {
            let cfg = load(&common, Mode::Forward)?;
            for p in run::forward(&cfg, out_dir(&common), kind)? {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Invert { common, kind, scenario, data } => {
            let cfg = load(&common, Mode::Invert)?;
            let out = out_dir(&common);
            let outcome = run::invert(&cfg, run::InvertArgs { out, scenario, kind, data })?;
            match outcome {
                run::Outcome::Unique => {
                    println!("unique reconstruction written to {}", out.display());
                    Ok(ExitCode::SUCCESS)
                }
                run::Outcome::NonUnique => {
                    println!("no unique reconstruction; see {}", out.join("result.json").display());
                    Ok(ExitCode::from(EXIT_NONUNIQUE))
                }
            }
        }
        Command::Example { common, kind } => {
            load(&common, Mode::Example)?;
            for p in run::example(out_dir(&common), kind)? {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { common } => {
            let cfg = load(&common, Mode::Verify)?;
            let reports = run::verify(&cfg, common.out.as_deref())?;
            Ok(if reports.iter().all(|r| r.passed()) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
