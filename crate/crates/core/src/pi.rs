//! Prime counts built from Λ.
//!
//! Over `c ∈ [c1, c2]` there are `2(c2 - c1 + 1)` candidates `6c ± 1`, and Λ
//! counts the composite ones, so the candidate primes number
//! `2(c2 - c1 + 1) - Λ(c1, c2)`. Below 47 the 14 candidates `5..=43` hold
//! exactly two composites (25 and 35), which the primes 2 and 3 offset, so
//! `π(6c2 + 1) = 2c2 - Λ(8, c2)`.

use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lambda::{check_interval, Variant};
use crate::oracle;
use crate::parallel::{lambda_with_workers, run_parallel, RunOptions, DEFAULT_CHUNK};
use crate::residue::GeneratorIndex;

/// First index of the cumulative formula; `6·8 + 1 = 49`.
pub const BASE_INDEX: i64 = 8;

/// Below this `h` the sieve oracle answers directly.
pub const SMALL_H: i64 = 6 * BASE_INDEX + 1;

/// Evaluation settings shared by the counting functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counter {
    pub variant: Variant,
    pub workers: u64,
    /// Persist Λ progress here and resume from it if present.
    pub checkpoint: Option<PathBuf>,
    pub chunk: u64,
}

impl Counter {
    pub fn new(variant: Variant, workers: u64) -> Self {
        Counter {
            variant,
            workers: workers.max(1),
            checkpoint: None,
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn sequential(variant: Variant) -> Self {
        Counter::new(variant, 1)
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>, chunk: u64) -> Self {
        self.checkpoint = Some(path.into());
        self.chunk = chunk;
        self
    }

    /// Λ(c1, c2) alone.
    pub fn lambda(&self, c1: GeneratorIndex, c2: GeneratorIndex) -> Result<u64> {
        let Some(path) = &self.checkpoint else {
            return Ok(lambda_with_workers(c1, c2, false, self.variant, self.workers)?.l);
        };
        check_interval(c1, c2)?;
        let parts = self.workers.clamp(1, (c2.get() - c1.get() + 1) as u64);
        let options = RunOptions::default()
            .with_checkpoint(path)
            .with_chunk(self.chunk);
        Ok(run_parallel(c1, c2, parts, false, self.variant, options)?.l)
    }

    /// `2(c2 - c1) - Λ(c1, c2) + 1`, taken literally.
    ///
    /// This is `prime_count_candidates(c1, c2) - 1`. It equals
    /// `π(6c2 + 1) - π(6c1 - 1)` only when `6c1 - 1` is prime; otherwise it
    /// undercounts by one.
    pub fn delta_pi_paper(&self, c1: GeneratorIndex, c2: GeneratorIndex) -> Result<i64> {
        if c1.get() < BASE_INDEX || c1 >= c2 {
            return Err(Error::Argument(format!(
                "interval count needs {BASE_INDEX} <= c1 < c2, got c1 = {c1}, c2 = {c2}"
            )));
        }
        let lambda = self.lambda(c1, c2)? as i64;
        Ok(2 * (c2.get() - c1.get()) - lambda + 1)
    }

    /// Number of primes among `6c ± 1` for `c ∈ [c1, c2]`.
    pub fn prime_count_candidates(&self, c1: GeneratorIndex, c2: GeneratorIndex) -> Result<u64> {
        check_interval(c1, c2)?;
        let candidates = 2 * (c2.get() - c1.get() + 1) as u64;
        Ok(candidates - self.lambda(c1, c2)?)
    }

    /// `π(6c2 + 1) = 2c2 - Λ(8, c2)`, counting 2 and 3.
    pub fn pi_exact(&self, c2: GeneratorIndex) -> Result<u64> {
        Ok(self.pi_exact_with_lambda(c2)?.0)
    }

    fn pi_exact_with_lambda(&self, c2: GeneratorIndex) -> Result<(u64, u64)> {
        if c2.get() < BASE_INDEX {
            return Err(Error::Argument(format!(
                "cumulative count needs c2 >= {BASE_INDEX}, got {c2}"
            )));
        }
        let lambda = self.lambda(GeneratorIndex(BASE_INDEX), c2)?;
        Ok((2 * c2.get() as u64 - lambda, lambda))
    }

    /// π(h) for any `h >= 2`.
    pub fn pi_of_h(&self, h: i64) -> Result<u64> {
        Ok(self.pi_report(h)?.pi)
    }

    /// π(h) together with the intermediate quantities it was derived from.
    pub fn pi_report(&self, h: i64) -> Result<PiReport> {
        if h < 2 {
            return Err(Error::Argument(format!("h must be >= 2, got {h}")));
        }
        if h < SMALL_H {
            return Ok(PiReport {
                h,
                pi: oracle::oracle_pi(h)?,
                c2: None,
                lambda: None,
                tail_prime: None,
            });
        }
        let c2 = GeneratorIndex::new((h - 1) / 6)?;
        // 6(c2 + 1) - 1 can exceed h; make sure it is representable first.
        let next = GeneratorIndex::new(c2.get() + 1)?;
        let (mut pi, lambda) = self.pi_exact_with_lambda(c2)?;
        let mut tail_prime = None;
        if next.beta_value() <= h && !self.variant.classify(next).beta_composite {
            pi += 1;
            tail_prime = Some(next.beta_value());
        }
        Ok(PiReport {
            h,
            pi,
            c2: Some(c2),
            lambda: Some(lambda),
            tail_prime,
        })
    }
}

/// Result of a π(h) query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiReport {
    pub h: i64,
    pub pi: u64,
    /// `⌊(h - 1)/6⌋`, absent when the sieve answered directly.
    pub c2: Option<GeneratorIndex>,
    /// Λ(8, c2).
    pub lambda: Option<u64>,
    /// `6(c2 + 1) - 1` when it is a prime `<= h` beyond `6c2 + 1`.
    pub tail_prime: Option<i64>,
}

pub fn delta_pi_paper(c1: GeneratorIndex, c2: GeneratorIndex) -> Result<i64> {
    Counter::sequential(Variant::Faithful).delta_pi_paper(c1, c2)
}

pub fn prime_count_candidates(c1: GeneratorIndex, c2: GeneratorIndex) -> Result<u64> {
    Counter::sequential(Variant::Faithful).prime_count_candidates(c1, c2)
}

pub fn pi_exact(c2: GeneratorIndex, variant: Variant) -> Result<u64> {
    Counter::sequential(variant).pi_exact(c2)
}

pub fn pi_of_h(h: i64, variant: Variant) -> Result<u64> {
    Counter::sequential(variant).pi_of_h(h)
}
