//! The `etascan` command line: argument parsing, the six commands and their
//! CSV/JSON reports.
//!
//! Exit codes: 0 pass, 1 fail, 2 I/O, 3 precondition, 4 disk validation.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter};

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Io = 2,
    Precondition = 3,
    Disk = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<etascan_core::Error> for CliError {
    fn from(e: etascan_core::Error) -> Self {
        use etascan_core::Error as E;
        let status = match &e {
            E::Io(_) | E::Cache(_) => Status::Io,
            E::Disk(_) => Status::Disk,
            _ => Status::Precondition,
        };
        Self::new(status, e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::new(Status::Io, e.to_string())
    }
}

fn emit(cli: &Cli, rep: &report::Report) -> Result<(), CliError> {
    let write = |w: &mut dyn io::Write| match cli.common.format {
        Format::Csv => rep.write_csv(w),
        Format::Json => rep.write_json(w),
    };
    match &cli.common.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::new(Status::Io, format!("{}: {e}", path.display())))?;
            write(&mut BufWriter::new(file))?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    Ok(())
}

/// Parses `argv`, runs the command, writes the report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Status::Pass as i32,
                _ => Status::Precondition as i32,
            };
        }
    };
    let outcome = commands::execute(&cli).and_then(|rep| {
        emit(&cli, &rep)?;
        Ok(rep)
    });
    match outcome {
        Ok(rep) => {
            eprintln!("{}: {}", rep.verdict(), rep.command);
            match rep.passed {
                Some(false) => Status::Fail as i32,
                _ => Status::Pass as i32,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.status as i32
        }
    }
}
