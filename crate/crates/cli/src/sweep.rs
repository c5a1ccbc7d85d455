//! Parallel parameter sweeps. Results are merged in parameter order, so the
//! output does not depend on the number of workers.

use maxclass5_core::classify::{sweep_params, verify_tuple, PropositionId, PropositionReport};
use maxclass5_core::params::MAX_N;
use rayon::prelude::*;

use crate::CliError;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "MAXCLASS5_THREADS";

pub fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.parse().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))
        })?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| CliError::Pool(e.to_string()))
}

pub fn check_range(n_range: [usize; 2]) -> Result<(), CliError> {
    if n_range[0] < 4 || n_range[1] > MAX_N {
        return Err(CliError::Usage(format!(
            "n range {}..{} must lie within 4..{MAX_N}",
            n_range[0], n_range[1]
        )));
    }
    Ok(())
}

pub fn verify(id: PropositionId, n_range: [usize; 2]) -> Result<PropositionReport, CliError> {
    check_range(n_range)?;
    let params = sweep_params(n_range);
    let results = pool()?.install(|| {
        params
            .par_iter()
            .map(|p| verify_tuple(id, p))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(PropositionReport::assemble(id, n_range, results))
}
