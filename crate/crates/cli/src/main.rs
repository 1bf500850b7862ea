use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dissipative_cli::config::ConfigEntries;
use dissipative_cli::runner::{self, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "dissipative", version, about = "Structure-preserving runs of dissipative evolution problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its energy ledger.
    Run { config: PathBuf },
    /// Run a configuration once per value of a numeric key.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Check the dissipation inequality on an existing ledger CSV.
    Check {
        csv: PathBuf,
        /// Slack tolerance (default 1e-8 (1 + |E⁰|)).
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn load(path: &PathBuf) -> Result<ConfigEntries, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    ConfigEntries::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let code = match cli.command {
        Command::Run { config } => match load(&config).and_then(|e| e.validate().map_err(|e| format!("{}: {e}", config.display()))) {
            Ok(c) => runner::run(&c, &mut out),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Command::Sweep { config, param, values } => match load(&config) {
            Ok(entries) => {
                let values: Vec<String> = values
                    .split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(str::to_string)
                    .collect();
                runner::sweep(&entries, &param, &values, &mut out)
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Command::Check { csv, tol } => runner::check(&csv, tol, &mut out),
    };
    ExitCode::from(code as u8)
}
