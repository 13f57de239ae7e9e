use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use modn_cli::{max_dim_from_env, run, Cli, EXIT_INVALID_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID_INPUT as u8),
            };
        }
    };
    let max_dim = match max_dim_from_env() {
        Ok(v) => v,
        Err(message) => {
            eprintln!("modn: {message}");
            return ExitCode::from(EXIT_INVALID_INPUT as u8);
        }
    };
    let code = run(
        &cli,
        max_dim,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
