use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = trispec::cli::Cli::parse();
    let config = match cli.into_config() {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(err.exit_code());
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match trispec::cli::run(&config, &mut out) {
        Ok(status) => ExitCode::from(status),
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(hint) = err.hint() {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
