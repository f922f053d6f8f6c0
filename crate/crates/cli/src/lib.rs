//! Instance files and the `ldcb` command line.
//!
//! Exit codes: 0 YES or success, 1 NO, 2 usage or parse error, 3 resource
//! limit exceeded.

use std::io::Write;

use clap::Parser;
use ldcb_core::Error;

mod commands;
pub mod format;

pub use commands::Cli;
pub use format::{parse_instance, parse_pref, parse_rule, render_instance};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ResourceExceeded(_) | Error::BallTooLarge { .. }) => 3,
            _ => 2,
        }
    }
}

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::execute(cli, out) {
        Ok(code) => code,
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => EXIT_YES,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
