//! File, report and sweep plumbing around `maxclass5-core`.

pub mod command;
pub mod export;
pub mod sweep;

use std::path::PathBuf;

use maxclass5_core::{
    ClassifyError, GroupError, LabelError, ParamError, StructureError, TableError, TransferError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("size guard: {what} needs n <= {limit}, got n = {n}")]
    SizeGuard {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Invalid = 1,
    Violations = 2,
}

/// Parses `A..B`, `A..=B` or a single `A` into an inclusive range.
pub fn parse_n_range(s: &str) -> Result<[usize; 2], String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad bound {t:?} in range {s:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok([lo, hi])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_n_range("4..7"), Ok([4, 7]));
        assert_eq!(parse_n_range("4..=7"), Ok([4, 7]));
        assert_eq!(parse_n_range("6"), Ok([6, 6]));
        assert!(parse_n_range("7..4").is_err());
        assert!(parse_n_range("a..4").is_err());
    }
}
