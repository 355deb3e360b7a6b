use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    satmps_cli::main_with(satmps_cli::Cli::parse())
}
