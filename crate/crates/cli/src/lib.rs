//! Library side of the `hsvd` command-line tool.
//!
//! Each subcommand is a plain function taking its parsed arguments, so the
//! commands can be driven from tests without spawning a process.

pub mod args;
mod bench;
mod commands;

use std::path::PathBuf;

use hsvd::HsvdError;

pub use args::{BenchArgs, CheckArgs, Cli, Command, FactorArgs, GenArgs, RunArgs, ScheduleArg};
pub use bench::{bench_csv, cmd_bench, BenchRow};
pub use commands::{
    cmd_check_strategy, cmd_eig, cmd_factor, cmd_gen, cmd_hsvd, max_relative_error,
    parse_even_range, Bundle, CheckLine, CheckReport, GenOutput, RunOutput, RunRecord,
};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const SINGULAR: i32 = 4;
    pub const DEFINITENESS_LOST: i32 = 5;
    pub const NOT_CONVERGED: i32 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] HsvdError),
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("strategy check failed for {0} order(s)")]
    CheckFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => exit::USAGE,
            Self::Csv { .. } => exit::IO,
            Self::CheckFailed(_) => exit::OTHER,
            Self::Core(e) => match e {
                HsvdError::Io { .. } | HsvdError::Format { .. } => exit::IO,
                HsvdError::NumericalSingularity { .. } | HsvdError::RankDeficient { .. } => {
                    exit::SINGULAR
                }
                HsvdError::DefinitenessLost { .. } => exit::DEFINITENESS_LOST,
                HsvdError::Shape(_) | HsvdError::Domain(_) => exit::OTHER,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub(crate) fn csv_err(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Csv { path, source }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let errs = [
            CliError::Usage("x".into()),
            CliError::Core(HsvdError::Io {
                path: "p".into(),
                source: std::io::Error::other("boom"),
            }),
            CliError::Core(HsvdError::NumericalSingularity {
                step: 0,
                pivot: 0.0,
                threshold: 1.0,
            }),
            CliError::Core(HsvdError::DefinitenessLost {
                block: 0,
                i: 0,
                j: 1,
                theta: 1.0,
            }),
        ];
        let mut codes: Vec<i32> = errs.iter().map(CliError::exit_code).collect();
        codes.push(exit::NOT_CONVERGED);
        codes.push(exit::OTHER);
        let mut uniq = codes.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), codes.len());
        assert!(!codes.contains(&exit::OK));
    }
}
