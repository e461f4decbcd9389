use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use spinboson_cli::{execute, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(Some(text)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinboson: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
