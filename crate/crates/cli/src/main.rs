use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wqed_cli::{config_hash, emit_plot_data, run_command, CliError, Command, RunOptions, Scenario};

/// Spectra, feature tables and inversions for emitters on a waveguide.
#[derive(Debug, Parser)]
#[command(name = "wqed", version)]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured grid size.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Accepted for interface stability; every algorithm is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(args: &Args) -> Result<(), CliError> {
    let source = fs::read_to_string(&args.config).map_err(|source| CliError::Io { path: args.config.clone(), source })?;
    let scenario = Scenario::parse(&source)?;
    let result = run_command(args.command, &scenario, RunOptions { grid_points: args.grid_points })?;
    for line in &result.diagnostics {
        eprintln!("{line}");
    }
    let hash = config_hash(&source);
    match &args.out {
        Some(path) => emit_plot_data(&result.table, &hash, path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(result.table.render(&hash).as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
