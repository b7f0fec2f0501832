//! Experiment runner around the `taumarch` solver: command-line parsing,
//! preset configurations, and the CSV / summary file formats.

pub mod args;
pub mod experiment;
pub mod output;

use std::fmt;

/// Process-level error classification; each class maps to one exit code.
#[derive(Debug)]
pub enum AppError {
    /// Invalid flags or parameter values (exit 1).
    Usage(String),
    /// The solver failed at run time (exit 2).
    Runtime(String),
    /// A file or directory could not be written (exit 3).
    Io(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Runtime(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(msg) => write!(f, "{msg}"),
            Self::Runtime(msg) => write!(f, "{msg}"),
            Self::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<taumarch::Error> for AppError {
    fn from(err: taumarch::Error) -> Self {
        match err {
            taumarch::Error::Diverged { .. } | taumarch::Error::SingularPivot { .. } => {
                Self::Runtime(err.to_string())
            }
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        Self::Io(err.to_string())
    }
}

/// Entry point shared by `main` and the test harness.
pub fn run_cli(argv: &[String]) -> Result<(), AppError> {
    match args::parse(argv)? {
        args::Invocation::Help => {
            print!("{}", args::USAGE);
            Ok(())
        }
        args::Invocation::Run(spec) => {
            let summary = experiment::run_experiment(&spec)?;
            println!("{}", summary.one_line(&spec));
            Ok(())
        }
    }
}
