use std::process::ExitCode;

use clap::Parser;
use divax::cli::{execute, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(output) => {
            print!("{}", output.report);
            ExitCode::from(output.exit_code as u8)
        }
        Err(err) => {
            eprintln!("divax: {err}");
            ExitCode::from(2)
        }
    }
}
