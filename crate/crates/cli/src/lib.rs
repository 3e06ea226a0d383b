//! Batch front end for `quasiherm-core`.
//!
//! Each subcommand evaluates a grid of couplings and writes one CSV table.
//! Exit codes: `0` success, `1` usage or configuration error, `2` numeric failure.

pub mod args;
pub mod commands;
pub mod config;
mod error;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, CommandKind};
pub use commands::{
    cmd_ep, cmd_evolve, cmd_hermitize, cmd_metric, cmd_spectrum, Report, FAILED, INDEFINITE,
    SINGULAR,
};
pub use config::{parse_config, Grid, Overrides, SweepConfig};
pub use error::CliError;
pub use table::{format_real, Table};

/// Runs one command for `kind`.
pub fn execute(kind: CommandKind, cfg: &SweepConfig) -> Result<Report, CliError> {
    match kind {
        CommandKind::Spectrum => cmd_spectrum(cfg),
        CommandKind::Metric => cmd_metric(cfg),
        CommandKind::Ep => cmd_ep(cfg),
        CommandKind::Hermitize => cmd_hermitize(cfg),
        CommandKind::Evolve => cmd_evolve(cfg),
    }
}

/// Runs `execute` on a pool of `cfg.threads` workers (all cores when unset).
pub fn execute_pooled(kind: CommandKind, cfg: &SweepConfig) -> Result<Report, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| execute(kind, cfg))
}

/// Parses `args`, merges the config file and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match run_command(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_command(
    command: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = match &command.shared().config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            Some(parse_config(&text)?)
        }
        None => None,
    };
    let cfg = SweepConfig::resolve(file.as_ref(), &command.overrides())?;
    let report = execute_pooled(command.kind(), &cfg)?;
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match &cfg.out {
        Some(path) => {
            let f = fs::File::create(path)
                .map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
            report.table.write_csv(BufWriter::new(f))?;
            if cfg.gnuplot {
                table::write_gnuplot(path, &report.table, &report.plot_columns, report.log_plot)?;
            }
        }
        None => report.table.write_csv(stdout)?,
    }
    Ok(report.exit_code())
}
