//! Parallel replication with results independent of the worker count.

use rayon::prelude::*;

use crate::error::{HarnessError, Result};

/// Stream identifier for replication `r` of grid cell `cell`.
pub fn stream_id(cell: u64, r: u64) -> u64 {
    (cell << 32) | r
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Runs `job(r)` for `r in 0..replications` on `workers` threads and
/// returns the results in replication order.
pub fn replicate<T, F>(workers: usize, replications: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(pool.install(|| (0..replications as u64).into_par_iter().map(&job).collect()))
}
