//! Parallel Λ evaluation over contiguous index ranges.
//!
//! `[c1, c2]` is split into equal contiguous chunks, one thread per chunk.
//! Workers report progress every `chunk` indices over a channel to the calling
//! thread, which owns all merging and all checkpoint writes. Results are
//! combined in assignment order, so the output never depends on scheduling.

use std::ops::ControlFlow;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::thread;

use crate::checkpoint::Checkpoint;
use crate::error::{Error, Result};
use crate::lambda::{self, check_interval, LambdaResult, PrimeRecord, Variant};
use crate::residue::GeneratorIndex;

pub const DEFAULT_CHUNK: u64 = 100_000;

/// One worker's share of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeAssignment {
    pub worker_ordinal: u64,
    pub start: GeneratorIndex,
    pub end: GeneratorIndex,
}

impl RangeAssignment {
    /// Number of indices in the range.
    pub fn count(&self) -> u64 {
        (self.end.get() - self.start.get() + 1) as u64
    }
}

/// Splits `[c1, c2]` into `parts` contiguous ranges whose sizes differ by at
/// most one, larger ranges first.
pub fn partition(
    c1: GeneratorIndex,
    c2: GeneratorIndex,
    parts: u64,
) -> Result<Vec<RangeAssignment>> {
    check_interval(c1, c2)?;
    let n = (c2.get() - c1.get() + 1) as u64;
    if parts == 0 {
        return Err(Error::Argument("parts must be >= 1".into()));
    }
    if parts > n {
        return Err(Error::Argument(format!(
            "{parts} parts requested for only {n} indices"
        )));
    }
    let base = n / parts;
    let extra = n % parts;
    let mut start = c1.get();
    let plan = (0..parts)
        .map(|p| {
            let len = base + u64::from(p < extra);
            let end = start + len as i64 - 1;
            let a = RangeAssignment {
                worker_ordinal: p,
                start: GeneratorIndex(start),
                end: GeneratorIndex(end),
            };
            start = end + 1;
            a
        })
        .collect();
    Ok(plan)
}

type CheckpointHook<'a> = Box<dyn FnMut(&Checkpoint) -> ControlFlow<()> + 'a>;

/// Knobs for [`run_parallel`].
pub struct RunOptions<'a> {
    /// Where to persist progress. An existing file is resumed from.
    pub checkpoint: Option<PathBuf>,
    /// Indices per progress report (and per checkpoint write) per worker.
    pub chunk: u64,
    /// Called after every merged progress report with the current state;
    /// returning `Break` stops the run as if it had been killed.
    pub on_progress: Option<CheckpointHook<'a>>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        RunOptions {
            checkpoint: None,
            chunk: DEFAULT_CHUNK,
            on_progress: None,
        }
    }
}

impl<'a> RunOptions<'a> {
    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn with_chunk(mut self, chunk: u64) -> Self {
        self.chunk = chunk;
        self
    }

    pub fn on_progress(mut self, hook: impl FnMut(&Checkpoint) -> ControlFlow<()> + 'a) -> Self {
        self.on_progress = Some(Box::new(hook));
        self
    }
}

struct Progress {
    worker: usize,
    next_c: i64,
    composites: u64,
    primes: Vec<PrimeRecord>,
}

/// Λ over `[c1, c2]` using `parts` worker threads.
///
/// The result is identical to [`lambda::lambda_range`] on the same interval.
/// Checkpointing covers counting runs only; asking for both a checkpoint and
/// the prime stream is an argument error.
pub fn run_parallel(
    c1: GeneratorIndex,
    c2: GeneratorIndex,
    parts: u64,
    emit_primes: bool,
    variant: Variant,
    mut options: RunOptions<'_>,
) -> Result<LambdaResult> {
    let plan = partition(c1, c2, parts)?;
    if options.chunk == 0 {
        return Err(Error::Argument("chunk must be >= 1".into()));
    }
    if emit_primes && options.checkpoint.is_some() {
        return Err(Error::Argument(
            "checkpointed runs count only; prime emission cannot be resumed".into(),
        ));
    }

    let mut state = match &options.checkpoint {
        Some(path) if path.exists() => {
            let saved = Checkpoint::load(path)?;
            saved.validate_against(c1, c2, variant, &plan)?;
            saved
        }
        _ => Checkpoint::fresh(c1, c2, variant, &plan),
    };
    let mut streams: Vec<Vec<PrimeRecord>> = vec![Vec::new(); plan.len()];
    let stop = AtomicBool::new(false);
    let mut failure: Option<Error> = None;
    let chunk = options.chunk;

    thread::scope(|scope| {
        // Rendezvous: a worker cannot run ahead of the aggregator by more than
        // the chunk it is computing, which bounds the work lost to a stop.
        let (tx, rx) = mpsc::sync_channel::<Progress>(0);
        for (worker, progress) in state.assignments.iter().enumerate() {
            if progress.is_done() {
                continue;
            }
            let tx = tx.clone();
            let stop = &stop;
            let (mut next, end) = (progress.next_c, progress.end.get());
            scope.spawn(move || {
                while next <= end && !stop.load(Ordering::Relaxed) {
                    let last = end.min(next.saturating_add(chunk as i64 - 1));
                    let mut composites = 0;
                    let mut primes = Vec::new();
                    lambda::accumulate(
                        next,
                        last,
                        variant,
                        &mut composites,
                        emit_primes.then_some(&mut primes),
                    );
                    next = last + 1;
                    let report = Progress {
                        worker,
                        next_c: next,
                        composites,
                        primes,
                    };
                    if tx.send(report).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        for report in rx {
            let slot = &mut state.assignments[report.worker];
            slot.next_c = report.next_c;
            slot.partial_l += report.composites;
            streams[report.worker].extend(report.primes);

            if failure.is_some() {
                continue;
            }
            if let Some(path) = &options.checkpoint {
                if let Err(e) = state.save(path) {
                    failure = Some(e);
                    stop.store(true, Ordering::Relaxed);
                    continue;
                }
            }
            if let Some(hook) = options.on_progress.as_mut() {
                if hook(&state).is_break() {
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
    });

    if let Some(e) = failure {
        return Err(e);
    }
    if !state.is_done() {
        if let Some(path) = &options.checkpoint {
            state.save(path)?;
        }
        return Err(Error::Interrupted {
            saved_indices: state.completed(),
            total_indices: (c2.get() - c1.get() + 1) as u64,
        });
    }
    if let Some(path) = &options.checkpoint {
        state.save(path)?;
    }

    Ok(LambdaResult {
        c1,
        c2,
        l: state.total_l(),
        primes: streams.concat(),
        primes_emitted: emit_primes,
    })
}

/// Λ with up to `workers` threads, falling back to a sequential scan for a
/// single worker and clamping the worker count to the interval length.
pub fn lambda_with_workers(
    c1: GeneratorIndex,
    c2: GeneratorIndex,
    emit_primes: bool,
    variant: Variant,
    workers: u64,
) -> Result<LambdaResult> {
    check_interval(c1, c2)?;
    let n = (c2.get() - c1.get() + 1) as u64;
    let parts = workers.clamp(1, n);
    if parts == 1 {
        lambda::lambda_range(c1, c2, emit_primes, variant)
    } else {
        run_parallel(c1, c2, parts, emit_primes, variant, RunOptions::default())
    }
}
