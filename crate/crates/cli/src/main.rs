use std::process::ExitCode;

use clap::Parser;
use giantqed_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("giantqed: {e}");
            e.exit_code()
        }
    }
}
