mod commands;
mod config;

use clap::Parser;
use std::process::ExitCode;

/// Layered time-series views of ensemble classifier votes.
#[derive(Parser)]
#[command(name = "fluxriver", version, about)]
struct Cli {
    #[command(subcommand)]
    command: commands::Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
