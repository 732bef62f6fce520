use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use strobe_cli::args::Cli;
use strobe_cli::error::{EXIT_INPUT, EXIT_OK};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the input-error code rather than clap's default
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    match strobe_cli::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("strobe: {e}");
            ExitCode::from(e.code)
        }
    }
}
