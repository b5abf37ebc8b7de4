use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use coulomb_momentum_cli::{execute, Cli, CliError};

const THREADS_ENV: &str = "COULOMB_MOMENTUM_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn run() -> Result<bool, CliError> {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    init_threads()?;
    let (record, format) = execute(&cli)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    record.write(format, &mut out)?;
    out.flush()?;
    Ok(record.all_passed())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // closed downstream pipe, e.g. `| head`
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
