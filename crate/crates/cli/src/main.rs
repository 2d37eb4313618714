use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::Parser;
use fairsplit_cli::{run, Cli, CliError};

fn emit(cli: &Cli, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    match &cli.json_out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Internal(format!("writing stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli.command).and_then(|v| emit(&cli, &v)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fairsplit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
