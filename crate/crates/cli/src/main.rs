use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    forriqp::run(forriqp::Cli::parse())
}
