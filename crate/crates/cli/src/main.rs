use std::process::ExitCode;

use clap::Parser;
use curveflow_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
