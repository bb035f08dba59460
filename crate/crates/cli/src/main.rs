use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use omegacoalg_cli::{depth_bound, run, Cli, MAX_DEPTH_VAR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let var = std::env::var(MAX_DEPTH_VAR).ok();
    let result = depth_bound(var.as_deref()).and_then(|bound| run(&cli, bound));
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush());
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
