use std::process::ExitCode;

use clap::Parser;
use maxclass5::command::{run, Cli};
use maxclass5::Status;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Status::Invalid as u8
            } else {
                0
            });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Invalid as u8)
        }
    }
}
