//! Corpus runs across threads. Each pair depends only on its seed, so the
//! report is the same for every thread count.

use std::num::NonZeroUsize;
use std::thread;

use tstkit_core::compliance::ComplianceError;
use tstkit_core::harness::{run_pair, GenConfig, PairRecord, Report};

pub const THREADS_VAR: &str = "TSTKIT_THREADS";

/// Thread count: `TSTKIT_THREADS` when set to a positive number, otherwise
/// the available parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

/// `theorem_harness` over `threads` workers; pairs are interleaved by index.
pub fn run_corpus(
    n: usize,
    cfg: &GenConfig,
    seed: u64,
    queue_bound: usize,
    depth: usize,
    threads: usize,
) -> Result<Report, ComplianceError> {
    let threads = threads.clamp(1, n.max(1));
    let mut records: Vec<PairRecord> = thread::scope(|s| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                s.spawn(move || {
                    (w..n)
                        .step_by(threads)
                        .map(|i| run_pair(cfg, seed, i, queue_bound, depth))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        workers
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Result<Vec<Vec<_>>, _>>()
            .map(|v| v.into_iter().flatten().collect())
    })?;
    records.sort_by_key(|r| r.index);
    Ok(Report::from_records(records))
}
