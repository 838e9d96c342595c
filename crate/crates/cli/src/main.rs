use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use recset_cli::report::emit_report;
use recset_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(outcome) => outcome,
        Err(err) => {
            eprintln!("recset: {err}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = emit_report(&outcome.report, &mut stdout).and_then(|_| stdout.flush()) {
        eprintln!("recset: output error: {err}");
        return ExitCode::from(3);
    }
    ExitCode::from(outcome.exit_code as u8)
}
