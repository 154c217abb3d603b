mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::Parser;

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let merged = match config::merge_args(raw.clone()) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    let cli = match args::Cli::try_parse_from(&merged) {
        Ok(cli) => cli,
        Err(err) => return handle_parse_error(err, &raw),
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

/// An unknown argument that was injected from the config file is reported
/// as an unknown configuration key (still exit code 2); everything else is
/// clap's own formatting.
fn handle_parse_error(err: clap::Error, raw: &[String]) -> ExitCode {
    if err.kind() == ErrorKind::UnknownArgument {
        if let Some(ContextValue::String(unknown)) = err.get(ContextKind::InvalidArg) {
            if let Some(key) = config_key_for(raw, unknown) {
                eprintln!("error: unknown configuration key `{key}` in config file");
                return ExitCode::from(2);
            }
        }
    }
    // clap exits 0 for --help/--version and 2 for usage errors
    err.exit()
}

fn config_key_for(raw: &[String], unknown_flag: &str) -> Option<String> {
    if raw.len() < 2 {
        return None;
    }
    let path = config::find_config_path(&raw[2..]).ok()??;
    let file_args = config::file_to_args(&path).ok()?;
    let flag = unknown_flag.split(' ').next()?;
    if file_args.iter().any(|a| a == flag) && !raw.iter().any(|a| a == flag) {
        Some(flag.trim_start_matches("--").replace('-', "_"))
    } else {
        None
    }
}
