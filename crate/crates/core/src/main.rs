use std::process::ExitCode;

use clap::Parser;
use sched_reduce::cli::{run, Cli, Exit};

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            Exit::for_error(&e)
        }
    };
    ExitCode::from(code as u8)
}
