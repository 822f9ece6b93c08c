use std::process::ExitCode;

use clap::Parser;

mod args;
mod manifest;
mod output;
mod run;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let result = run::resolve(cli.command).and_then(|(inv, dir)| run::execute(&inv, &dir));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
