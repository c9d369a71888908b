//! Threaded certification sweeps.

use std::num::NonZeroUsize;
use std::thread;

use spherelp_core::auxfn::{CertificationGrid, CertificationReport, CertifyOptions};
use spherelp_core::{CosineSeries, Result};

pub fn default_jobs() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// Splits the grid into contiguous slab ranges, sweeps them on up to `jobs`
/// threads and merges the partials in slab order. The report does not
/// depend on `jobs`.
pub fn certify_parallel(
    series: &CosineSeries,
    options: CertifyOptions,
    jobs: usize,
) -> Result<CertificationReport> {
    let grid = CertificationGrid::new(series, options)?;
    let slabs = grid.slabs();
    let jobs = (jobs.max(1) as u64).min(slabs);
    if jobs <= 1 {
        let partial = grid.sweep(0..slabs);
        return Ok(grid.finish([partial]));
    }
    let bounds: Vec<u64> = (0..=jobs).map(|j| slabs * j / jobs).collect();
    let partials = thread::scope(|scope| {
        let handles: Vec<_> = bounds
            .windows(2)
            .map(|w| {
                let grid = &grid;
                let range = w[0]..w[1];
                scope.spawn(move || grid.sweep(range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked"))
            .collect::<Vec<_>>()
    });
    Ok(grid.finish(partials))
}
