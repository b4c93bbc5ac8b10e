use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hlcs_cli::{run, CliError, Command, Output};

/// Linear control systems on the Heisenberg group and its quotients.
#[derive(Parser)]
#[command(name = "hlcs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the flow of a linear field (CSV: t,x,y,z).
    Flow(Common),
    /// Check whether a flow leaves a subgroup invariant (JSON).
    Invariance(Common),
    /// Integrate a system under a piecewise-constant control (CSV).
    Simulate(Common),
    /// Estimate the control set on R x T (grid CSV to --out, JSON summary to stdout).
    Controlset(Common),
    /// Check the rank condition symbolically and numerically (JSON).
    Larc(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

fn write_outputs(output: &Output, out: Option<&Path>) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    match (out, &output.csv, &output.summary) {
        (Some(path), Some(csv), summary) => {
            fs::write(path, csv)?;
            if let Some(s) = summary {
                stdout.write_all(s.as_bytes())?;
            }
        }
        (Some(path), None, Some(summary)) => {
            fs::write(path, summary)?;
            stdout.write_all(summary.as_bytes())?;
        }
        // Without --out a summary, when present, wins over bulk output.
        (None, csv, summary) => {
            if let Some(text) = summary.as_ref().or(csv.as_ref()) {
                stdout.write_all(text.as_bytes())?;
            }
        }
        (Some(_), None, None) => {}
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Flow(c) => (Command::Flow, c),
        Cmd::Invariance(c) => (Command::Invariance, c),
        Cmd::Simulate(c) => (Command::Simulate, c),
        Cmd::Controlset(c) => (Command::ControlSet, c),
        Cmd::Larc(c) => (Command::Larc, c),
    };
    let result = fs::read_to_string(&common.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", common.config.display())))
        .and_then(|text| run(command, &text, common.seed))
        .and_then(|output| write_outputs(&output, common.out.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hlcs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
