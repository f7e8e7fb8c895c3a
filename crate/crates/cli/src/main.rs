mod args;
mod commands;
mod dot;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit codes: 0 feasible / pass, 1 infeasible / fail, 2 usage or input
/// error, 3 search cap hit before a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Negative = 1,
    InputError = 2,
    Cap = 3,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SNAPSHOT_LAB_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Enumerate(a) => commands::enumerate(&a),
        Command::Reduce(a) => commands::reduce(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Clique(a) => commands::clique(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let status = match e {
                snapshot_lab::Error::Replay(_) => Status::Negative,
                _ => Status::InputError,
            };
            ExitCode::from(status as u8)
        }
    }
}
