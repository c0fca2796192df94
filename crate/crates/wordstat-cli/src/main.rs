//! `wordstat`: exact and simulated subword statistics from the command line.

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn run(cli: &Cli) -> Result<String, CliError> {
    let report = match &cli.command {
        Command::Count(a) => commands::count(a)?,
        Command::Decompose(a) => commands::decompose(a)?,
        Command::Classify(a) => commands::classify_cmd(a)?,
        Command::Moments(a) => commands::moments(a)?,
        Command::Spectrum(a) => commands::spectrum(a)?,
        Command::Simulate(a) => return commands::simulate(a),
    };
    Ok(report.render(cli.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
