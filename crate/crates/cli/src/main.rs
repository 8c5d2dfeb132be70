use std::process::ExitCode;

use clap::Parser;
use qtomo_cli::{execute, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli, rand::random::<u64>).and_then(|cfg| execute(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtomo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
