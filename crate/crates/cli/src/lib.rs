//! Command-line front end: argument types, the `verify` suite and the
//! CSV/JSON writers.

pub mod args;
pub mod commands;
pub mod defaults;
pub mod error;
pub mod output;
pub mod suite;

pub use args::{Check, Cli, Command, Format};
pub use error::CliError;
pub use output::{OutputRecord, SCHEMA_VERSION};

/// Runs one parsed invocation and returns its record and output format.
pub fn execute(cli: &Cli) -> Result<(OutputRecord, Format), CliError> {
    match &cli.command {
        Command::Energies(a) => Ok((commands::energies(a)?, a.format)),
        Command::Radial(a) => Ok((commands::radial(a)?, a.format)),
        Command::Verify(a) => Ok((commands::verify(a)?, a.format)),
    }
}
