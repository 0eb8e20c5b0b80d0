//! Sweep fan-out. Results are gathered in plan order, so the output does
//! not depend on the number of worker threads.

use hybridlight::entangle::{evaluate_point, Source, SweepPlan, SweepRecord};
use hybridlight::{Cutoff, DelocalizedPhoton, Error, Result};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "HYBRIDLIGHT_THREADS";

/// Worker count from `HYBRIDLIGHT_THREADS`; `None` leaves rayon's default.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidParameter(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

pub fn with_pool<R: Send>(threads: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

pub fn parallel_sweep(
    source: &Source<f64>,
    photon: &DelocalizedPhoton<f64>,
    plan: &SweepPlan<f64>,
    cutoff: Cutoff,
    threads: Option<usize>,
) -> Result<Vec<SweepRecord<f64>>> {
    let points = plan.points();
    with_pool(threads, || {
        points
            .par_iter()
            .map(|&(b, t, n)| evaluate_point(source, photon, b, t, n, cutoff))
            .collect::<Result<Vec<_>>>()
    })?
}
