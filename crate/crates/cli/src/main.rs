//! `cherednik <command> --config <path> [--format tsv|jsonl] [--out <path>]`
//!
//! Exit codes: 0 success, 1 usage or I/O, 2 invalid configuration, 3 computation error.

mod commands;
mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::commands::run_command;
use crate::config::{parse_config, Command};
use crate::report::{emit_report, Format};

const PRECISION_ENV: &str = "CHEREDNIK_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "cherednik", version, about = "Rational Cherednik algebra computations")]
struct Args {
    command: Command,
    /// Job configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("cherednik: {message}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let env_precision = match std::env::var(PRECISION_ENV) {
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(n) if n > 0 => Some(n),
            _ => return fail(1, format!("{PRECISION_ENV} must be a positive integer, got `{v}`")),
        },
        Err(_) => None,
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(1, format!("{}: {e}", args.config.display())),
    };
    let base = args.config.parent().unwrap_or(Path::new("."));
    let cfg = match parse_config(&text, base, env_precision) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    if let Some(c) = cfg.command {
        if c != args.command {
            return fail(
                2,
                format!("config field `command`: `{}` does not match `{}`", c.name(), args.command.name()),
            );
        }
    }
    let report = match run_command(&cfg, args.command) {
        Ok(r) => r,
        Err(e) => return fail(e.exit_code(), e),
    };
    let out = emit_report(&report, args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                return fail(1, format!("{}: {e}", path.display()));
            }
        }
        None => print!("{out}"),
    }
    ExitCode::SUCCESS
}
