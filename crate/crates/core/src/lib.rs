//! Prime counting over the residue classes `6n ± 1`.
//!
//! Every prime above 3 is `6c + 1` or `6c - 1` for some positive `c`, and a
//! candidate is composite exactly when it factors into two numbers from the
//! same pair of classes. [`lambda`] decides that per index by bounded
//! divisibility scans, counting composites over an interval as Λ(c1, c2);
//! [`pi`] turns Λ into π(h) and interval counts; [`parallel`] splits the work
//! across threads with resumable checkpoints. [`oracle`] holds independent
//! reference implementations used for verification.
//!
//! ```
//! use sixsieve::{pi, Variant};
//!
//! assert_eq!(pi::pi_of_h(103, Variant::Fast).unwrap(), 27);
//! ```

pub mod checkpoint;
pub mod error;
pub mod lambda;
pub mod oracle;
pub mod parallel;
pub mod pi;
pub mod residue;

pub use checkpoint::Checkpoint;
pub use error::{Error, Result};
pub use lambda::{
    classify, classify_fast, lambda_range, CandidateClassification, LambdaResult, PrimeRecord,
    ScanBranch, ScanWitness, Variant,
};
pub use parallel::{partition, run_parallel, RangeAssignment, RunOptions};
pub use pi::{Counter, PiReport};
pub use residue::{ClassTag, GeneratorIndex, MatrixIndex};
