//! Residue-class arithmetic over the two prime-bearing classes modulo 6.
//!
//! Every prime other than 2 and 3 is, up to sign, either `6n + 1` (class
//! [`ClassTag::Alpha`]) or `6n - 1` (class [`ClassTag::Beta`]). Products of
//! such numbers stay inside the two classes, which is what lets the generator
//! matrix `a(i, j) = i + j(6i + 1)` index every composite `6c + 1` through the
//! identity `6·a(i, j) + 1 = (6i + 1)(6j + 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest magnitude an index may take so that `6n ± 1` still fits in `i64`.
pub const INDEX_LIMIT: i64 = (i64::MAX - 1) / 6;

/// Residue family of a prime candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClassTag {
    /// `6n + 1`
    Alpha,
    /// `6n - 1`
    Beta,
}

impl ClassTag {
    /// Class of an integer not divisible by 2 or 3, sign included.
    pub fn of(value: i64) -> Option<ClassTag> {
        match value.rem_euclid(6) {
            1 => Some(ClassTag::Alpha),
            5 => Some(ClassTag::Beta),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Alpha => "ALPHA",
            ClassTag::Beta => "BETA",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Signed index `n` generating the candidates `6n + 1` and `6n - 1`.
///
/// Construction validates that both candidates fit in `i64`, so arithmetic on
/// `6n ± 1` downstream never needs overflow checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct GeneratorIndex(pub(crate) i64);

impl GeneratorIndex {
    pub fn new(value: i64) -> Result<Self> {
        if (-INDEX_LIMIT..=INDEX_LIMIT).contains(&value) {
            Ok(GeneratorIndex(value))
        } else {
            Err(Error::Range(format!(
                "generator index {value} outside [-{INDEX_LIMIT}, {INDEX_LIMIT}]"
            )))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// `6n + 1`
    pub fn alpha_value(self) -> i64 {
        6 * self.0 + 1
    }

    /// `6n - 1`
    pub fn beta_value(self) -> i64 {
        6 * self.0 - 1
    }
}

impl TryFrom<i64> for GeneratorIndex {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        GeneratorIndex::new(value)
    }
}

impl From<GeneratorIndex> for i64 {
    fn from(index: GeneratorIndex) -> i64 {
        index.0
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for GeneratorIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: i64 = s
            .trim()
            .parse()
            .map_err(|e| Error::Argument(format!("bad generator index {s:?}: {e}")))?;
        GeneratorIndex::new(value)
    }
}

/// Position `(i, j)` in the generator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixIndex {
    pub i: i64,
    pub j: i64,
}

impl MatrixIndex {
    pub fn new(i: i64, j: i64) -> Self {
        MatrixIndex { i, j }
    }

    /// True off both axes; only those positions belong to the sieved set.
    pub fn is_off_axis(self) -> bool {
        self.i != 0 && self.j != 0
    }

    pub fn transposed(self) -> Self {
        MatrixIndex {
            i: self.j,
            j: self.i,
        }
    }
}

pub fn class_value(n: GeneratorIndex, tag: ClassTag) -> i64 {
    match tag {
        ClassTag::Alpha => n.alpha_value(),
        ClassTag::Beta => n.beta_value(),
    }
}

/// Same as [`class_value`] for a raw `i64`, failing on overflow.
pub fn checked_class_value(n: i64, tag: ClassTag) -> Result<i64> {
    let index = GeneratorIndex::new(n)?;
    Ok(class_value(index, tag))
}

/// `(6c + 1, 6c - 1)` for a positive index.
pub fn candidate_pair(c: GeneratorIndex) -> Result<(i64, i64)> {
    if c.get() < 1 {
        return Err(Error::Argument(format!(
            "candidate index must be >= 1, got {c}"
        )));
    }
    Ok((c.alpha_value(), c.beta_value()))
}

/// Class of a product given the classes of its factors.
pub fn product_class(a: ClassTag, b: ClassTag) -> ClassTag {
    if a == b {
        ClassTag::Alpha
    } else {
        ClassTag::Beta
    }
}

/// `a(i, j) = i + j(6i + 1)`.
pub fn matrix_element(idx: MatrixIndex) -> Result<i64> {
    let MatrixIndex { i, j } = idx;
    6i64.checked_mul(i)
        .and_then(|v| v.checked_add(1))
        .and_then(|d| j.checked_mul(d))
        .and_then(|v| v.checked_add(i))
        .ok_or_else(|| Error::overflow(format_args!("a({i}, {j})")))
}
