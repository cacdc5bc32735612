//! Command-line front end for `sixsieve`.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 overflow or resource
//! exhaustion, 3 verification mismatch.

pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::Value;
use sixsieve::lambda::{classify, classify_fast};
use sixsieve::oracle::is_prime_trial;
use sixsieve::parallel::{lambda_with_workers, partition, DEFAULT_CHUNK};
use sixsieve::{
    run_parallel, CandidateClassification, Counter, Error, GeneratorIndex, RunOptions, Variant,
};

use crate::output::{Format, Kind, OutputRecord, Renderer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Widest interval `verify` will sweep.
pub const VERIFY_MAX_SPAN: i64 = 10_000_000;
/// Largest index `verify` accepts; trial division of `6c ± 1` stays below ~10⁷ steps.
pub const VERIFY_MAX_INDEX: i64 = 10_000_000_000_000 / 6;

#[derive(Debug, Parser)]
#[command(
    name = "sixsieve",
    version,
    about = "Prime counting over the classes 6n±1"
)]
pub struct Cli {
    /// Output format: text, json (one object per line) or csv.
    #[arg(long, global = true, default_value = "text")]
    pub format: Format,

    /// Persist Λ progress to this file and resume from it if it exists.
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,

    /// Indices per worker between checkpoint writes.
    #[arg(long, global = true, default_value_t = DEFAULT_CHUNK)]
    pub chunk: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count primes <= h.
    Pi {
        h: String,
        #[arg(long, default_value = "fast")]
        variant: Variant,
        #[arg(long, default_value_t = 1)]
        workers: u64,
    },
    /// Λ(c1, c2) and the prime counts derived from it.
    Range {
        c1: String,
        c2: String,
        /// Accept c1 = c2 and c1 < 8; the interval formula is then omitted.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 1)]
        workers: u64,
        #[arg(long, default_value = "fast")]
        variant: Variant,
    },
    /// List the primes 6c ± 1 for c in [c1, c2].
    List {
        c1: String,
        c2: String,
        #[arg(long, default_value_t = 1)]
        workers: u64,
        #[arg(long, default_value = "fast")]
        variant: Variant,
    },
    /// Check the classifier against trial division on every candidate.
    Verify {
        c1: String,
        c2: String,
        #[arg(long, default_value = "faithful")]
        variant: Variant,
    },
    /// Time Λ(c1, c2) for several worker counts.
    Bench {
        c1: String,
        c2: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        workers_list: Vec<u64>,
        #[arg(long, default_value = "fast")]
        variant: Variant,
    },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Argument(_) | Error::Integrity(_)) => EXIT_USAGE,
            CliError::Lib(_) => EXIT_RESOURCE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Mismatch(m) => m.clone(),
        }
    }
}

/// Integer argument; digit strings too wide for `i64` are range errors.
pub fn parse_int(s: &str) -> Result<i64, Error> {
    let t = s.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Argument(format!("expected an integer, got {s:?}")));
    }
    t.parse()
        .map_err(|_| Error::Range(format!("{t} does not fit in a signed 64-bit integer")))
}

fn parse_index(s: &str) -> Result<GeneratorIndex, Error> {
    GeneratorIndex::new(parse_int(s)?)
}

fn elapsed_ms(start: Instant) -> Value {
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Value::from((ms * 1000.0).round() / 1000.0)
}

fn opt<T: Into<Value>>(v: Option<T>) -> Value {
    v.map_or(Value::Null, Into::into)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let mut renderer = Renderer::new(cli.format, out);
    let counter = |variant: Variant, workers: u64| {
        let c = Counter::new(variant, workers);
        match &cli.checkpoint {
            Some(path) => c.with_checkpoint(path, cli.chunk),
            None => c,
        }
    };
    match &cli.command {
        Command::Pi {
            h,
            variant,
            workers,
        } => {
            let h = parse_int(h)?;
            let started = Instant::now();
            let report = counter(*variant, *workers).pi_report(h)?;
            renderer.emit(
                &OutputRecord::new(Kind::Pi)
                    .field("h", report.h)
                    .field("pi", report.pi)
                    .field("c2", opt(report.c2.map(GeneratorIndex::get)))
                    .field("lambda", opt(report.lambda))
                    .field("tail_prime", opt(report.tail_prime))
                    .field("variant", variant.as_str())
                    .field("workers", *workers)
                    .field("elapsed_ms", elapsed_ms(started)),
            )?;
        }
        Command::Range {
            c1,
            c2,
            exact,
            workers,
            variant,
        } => {
            let (c1, c2) = (parse_index(c1)?, parse_index(c2)?);
            let paper_domain = c1.get() >= 8 && c1 < c2;
            if c1 > c2 {
                return Err(Error::Argument(format!("c1 ({c1}) exceeds c2 ({c2})")).into());
            }
            if !exact && !paper_domain {
                return Err(Error::Argument(format!(
                    "range needs 8 <= c1 < c2 (got {c1}, {c2}); pass --exact for the inclusive count alone"
                ))
                .into());
            }
            let started = Instant::now();
            let lambda = counter(*variant, *workers).lambda(c1, c2)?;
            let exact_count = 2 * (c2.get() - c1.get() + 1) as u64 - lambda;
            let delta = paper_domain.then(|| exact_count as i64 - 1);
            let low = c1.beta_value();
            let caveat = paper_domain && !is_prime_trial(low);
            if caveat {
                writeln!(
                    err,
                    "note: 6*c1-1 = {low} is composite, so delta_pi_paper = {} undercounts the primes in ({low}, {}] by one; use exact = {exact_count}",
                    delta.unwrap_or_default(),
                    c2.alpha_value()
                )?;
            }
            renderer.emit(
                &OutputRecord::new(Kind::Range)
                    .field("c1", c1.get())
                    .field("c2", c2.get())
                    .field("lambda", lambda)
                    .field("delta_pi_paper", opt(delta))
                    .field("exact", exact_count)
                    .field("delta_pi_caveat", caveat)
                    .field("variant", variant.as_str())
                    .field("workers", *workers)
                    .field("elapsed_ms", elapsed_ms(started)),
            )?;
        }
        Command::List {
            c1,
            c2,
            workers,
            variant,
        } => {
            let (c1, c2) = (parse_index(c1)?, parse_index(c2)?);
            if cli.checkpoint.is_some() {
                return Err(Error::Argument("list does not support --checkpoint".into()).into());
            }
            let result = lambda_with_workers(c1, c2, true, *variant, *workers)?;
            for p in &result.primes {
                renderer.emit(
                    &OutputRecord::new(Kind::Prime)
                        .field("c", p.c.get())
                        .field("value", p.value)
                        .field("class", p.tag.as_str()),
                )?;
            }
        }
        Command::Verify { c1, c2, variant } => {
            let (c1, c2) = (parse_index(c1)?, parse_index(c2)?);
            let classifier = match variant {
                Variant::Faithful => classify,
                Variant::Fast => classify_fast,
            };
            let outcome = verify_with(c1, c2, classifier)?;
            let record = outcome.record(*variant);
            renderer.emit(&record)?;
            if let Some(d) = &outcome.first_divergence {
                return Err(CliError::Mismatch(format!(
                    "{} divergence(s); first at c = {}: {}",
                    outcome.divergences, d.c, d.detail
                )));
            }
        }
        Command::Bench {
            c1,
            c2,
            workers_list,
            variant,
        } => {
            let (c1, c2) = (parse_index(c1)?, parse_index(c2)?);
            if workers_list.is_empty() {
                return Err(Error::Argument("empty --workers-list".into()).into());
            }
            // Validate every plan before timing anything.
            for &w in workers_list {
                partition(c1, c2, w)?;
            }
            let mut lambdas = Vec::new();
            for &w in workers_list {
                let started = Instant::now();
                let result = run_parallel(c1, c2, w, false, *variant, RunOptions::default())?;
                lambdas.push((w, result.l, started.elapsed().as_secs_f64()));
            }
            // Speed-up is relative to the single-worker row when there is one.
            let (base_w, _, base_secs) = lambdas
                .iter()
                .copied()
                .find(|&(w, _, _)| w == 1)
                .unwrap_or(lambdas[0]);
            for &(w, l, secs) in &lambdas {
                let speedup = if secs > 0.0 { base_secs / secs } else { 0.0 };
                renderer.emit(
                    &OutputRecord::new(Kind::Bench)
                        .field("c1", c1.get())
                        .field("c2", c2.get())
                        .field("workers", w)
                        .field("lambda", l)
                        .field("elapsed_ms", (secs * 1e6).round() / 1e3)
                        .field("speedup", (speedup * 1000.0).round() / 1000.0)
                        .field("baseline_workers", base_w)
                        .field("variant", variant.as_str()),
                )?;
            }
            if lambdas.iter().any(|&(_, l, _)| l != lambdas[0].1) {
                return Err(CliError::Mismatch("Λ differs across worker counts".into()));
            }
        }
    }
    Ok(())
}

/// First disagreement found by [`verify_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub c: i64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub c1: GeneratorIndex,
    pub c2: GeneratorIndex,
    pub checked: u64,
    pub divergences: u64,
    pub first_divergence: Option<Divergence>,
}

impl VerifyOutcome {
    pub fn record(&self, variant: Variant) -> OutputRecord {
        let first = self.first_divergence.as_ref();
        OutputRecord::new(Kind::Verify)
            .field("c1", self.c1.get())
            .field("c2", self.c2.get())
            .field("variant", variant.as_str())
            .field("checked", self.checked)
            .field("divergences", self.divergences)
            .field("first_divergence_c", opt(first.map(|d| d.c)))
            .field("status", if first.is_none() { "ok" } else { "mismatch" })
    }
}

/// Compares `classifier` with trial division on `6c ± 1` for every
/// `c ∈ [c1, c2]`, and checks that every witness it returns is exact.
pub fn verify_with(
    c1: GeneratorIndex,
    c2: GeneratorIndex,
    classifier: impl Fn(GeneratorIndex) -> CandidateClassification,
) -> Result<VerifyOutcome, Error> {
    if c1.get() < 1 || c1 > c2 {
        return Err(Error::Argument(format!(
            "verify needs 1 <= c1 <= c2, got {c1}, {c2}"
        )));
    }
    if c2.get() - c1.get() + 1 > VERIFY_MAX_SPAN || c2.get() > VERIFY_MAX_INDEX {
        return Err(Error::Resource(format!(
            "verify is limited to {VERIFY_MAX_SPAN} indices below {VERIFY_MAX_INDEX}"
        )));
    }
    let mut outcome = VerifyOutcome {
        c1,
        c2,
        checked: 0,
        divergences: 0,
        first_divergence: None,
    };
    for c in c1.get()..=c2.get() {
        let index = GeneratorIndex::new(c)?;
        let v = classifier(index);
        let mut problems = Vec::new();
        let (alpha, beta) = (index.alpha_value(), index.beta_value());
        if v.alpha_composite == is_prime_trial(alpha) {
            problems.push(format!(
                "{alpha} classified composite={}",
                v.alpha_composite
            ));
        }
        if v.beta_composite == is_prime_trial(beta) {
            problems.push(format!("{beta} classified composite={}", v.beta_composite));
        }
        if v.alpha_composite != v.alpha_witness.is_some()
            || v.beta_composite != v.beta_witness.is_some()
        {
            problems.push("verdict without matching witness".into());
        }
        for w in v.alpha_witness.iter().chain(v.beta_witness.iter()) {
            if !w.proves(index) {
                problems.push(format!("witness {w:?} does not reconstruct c"));
            }
        }
        outcome.checked += 1;
        if !problems.is_empty() {
            outcome.divergences += 1;
            outcome.first_divergence.get_or_insert(Divergence {
                c,
                detail: problems.join("; "),
            });
        }
    }
    Ok(outcome)
}
