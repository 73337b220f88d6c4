use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use recurrent_aft::cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::SelftestFailed { report, .. } = &e {
                print!("{report}");
            }
            eprintln!("recaft: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
