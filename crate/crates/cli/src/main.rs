//! `olx`: reproducible experiments on Euler products of L-functions.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numeric failure,
//! 3 resource budget exceeded. Every failure prints one line to stderr:
//! `olx: error kind=<kind> exit=<code> message=<json string>`.

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(olx_core::Error),
    Io(String),
}

impl From<olx_core::Error> for CliError {
    fn from(e: olx_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> i32 {
        use olx_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::Domain(_) | E::Range(_) | E::ModelSpec(_) | E::UnsupportedModel { .. } => 1,
                E::Degenerate { .. } | E::NumericFailure(_) | E::Invariant(_) => 2,
                E::Resource { .. } => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn report(err: &CliError) -> i32 {
    let code = err.exit_code();
    let message = serde_json::to_string(&err.message()).unwrap_or_default();
    eprintln!("olx: error kind={} exit={code} message={message}", err.kind());
    code
}

/// Sizes the global pool from `OLX_THREADS`; results do not depend on it.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("OLX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("OLX_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn run(argv: Vec<OsString>) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    configure_threads()?;
    olx_core::validate_euler_gamma()?;
    let (config, out) = commands::execute(&cli.command)?;
    let common = cli.command.common();
    let bytes = output::render(&config, &out, common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() {
    let code = match run(std::env::args_os().collect()) {
        Ok(()) => 0,
        Err(e) => report(&e),
    };
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;
    use olx_core::Error as E;

    #[test]
    fn exit_code_mapping() {
        let code = |e: E| CliError::Core(e).exit_code();
        assert_eq!(code(E::Domain("x".into())), 1);
        assert_eq!(code(E::Range("x".into())), 1);
        assert_eq!(code(E::ModelSpec("x".into())), 1);
        assert_eq!(code(E::NumericFailure("x".into())), 2);
        assert_eq!(code(E::Degenerate { p: 2, modulus: 0.0, at: None }), 2);
        assert_eq!(code(E::Resource { param: "x", value: "1".into(), limit: "0".into() }), 3);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    }
}
