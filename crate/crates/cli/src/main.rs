mod args;
mod commands;
mod output;
mod validate;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors; every other parse failure is a usage error
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match &cli.command {
        Command::Density(a) => commands::density(a, &argv),
        Command::Spacing(a) => commands::spacing(a, &argv),
        Command::Marginal(a) => commands::marginal(a, &argv),
        Command::Sample(a) => commands::sample(a, &argv),
        Command::TwinCheck(a) => commands::twin_check(a, &argv),
        Command::Validate(a) => validate::run(a, &argv),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("etaue: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
