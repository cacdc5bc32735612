//! The Λ scan: classify each index `c` by searching for a factorization of
//! `6c + 1` and `6c - 1` inside three bounded ranges of the scan variable
//! `x`, and count the composite candidates over an interval.
//!
//! For a fixed `c` the three scans are
//!
//! * β·β: `x ∈ [-⌊(c+1)/5⌋, -⌊(√(1+6c)+1)/6⌋]`, testing `(6x+1) | (c - x)`;
//! * α·α: `x ∈ [1, ⌊(√(1+6c)-1)/6⌋]`, testing `(6x+1) | (c - x)`;
//! * α·β: `x ∈ [-⌊(c+1)/7⌋, -1]`, testing `(6x+1) | (-c - x)`.
//!
//! A hit in either of the first two proves `6c + 1` composite, a hit in the
//! third proves `6c - 1` composite. `x = 0` is never tested (its divisor is 1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{ClassTag, GeneratorIndex};

/// Which classification routine drives a Λ evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The three scan ranges verbatim. Two of them are linear in `c`.
    Faithful,
    /// Trial division by `6k ± 1` up to the square root; same verdicts.
    #[default]
    Fast,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Faithful => "faithful",
            Variant::Fast => "fast",
        }
    }

    pub fn classify(self, c: GeneratorIndex) -> CandidateClassification {
        match self {
            Variant::Faithful => classify(c),
            Variant::Fast => classify_fast(c),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "faithful" => Ok(Variant::Faithful),
            "fast" => Ok(Variant::Fast),
            other => Err(Error::Argument(format!(
                "unknown variant {other:?} (expected faithful or fast)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScanBranch {
    BetaBeta,
    AlphaAlpha,
    AlphaBeta,
}

/// A scan hit: `x + cofactor·(6x + 1)` equals `c` for the β·β and α·α
/// branches and `-c` for α·β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScanWitness {
    pub x: i64,
    pub cofactor: i64,
    pub branch: ScanBranch,
}

impl ScanWitness {
    /// The index this witness reconstructs, computed in 128 bits.
    pub fn reconstructed(&self) -> i128 {
        let x = self.x as i128;
        let q = self.cofactor as i128;
        let v = x + q * (6 * x + 1);
        match self.branch {
            ScanBranch::BetaBeta | ScanBranch::AlphaAlpha => v,
            ScanBranch::AlphaBeta => -v,
        }
    }

    /// Exact check of the branch identity against `c`.
    pub fn proves(&self, c: GeneratorIndex) -> bool {
        self.x != 0 && self.cofactor != 0 && self.reconstructed() == c.get() as i128
    }

    /// The two factors `(6x + 1, 6·cofactor + 1)` whose product is `6c + 1`
    /// (β·β, α·α) or `-(6c - 1)` (α·β).
    pub fn factors(&self) -> (i128, i128) {
        (6 * self.x as i128 + 1, 6 * self.cofactor as i128 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateClassification {
    pub c: GeneratorIndex,
    pub alpha_composite: bool,
    pub beta_composite: bool,
    pub alpha_witness: Option<ScanWitness>,
    pub beta_witness: Option<ScanWitness>,
}

impl CandidateClassification {
    fn from_witnesses(
        c: GeneratorIndex,
        alpha_witness: Option<ScanWitness>,
        beta_witness: Option<ScanWitness>,
    ) -> Self {
        CandidateClassification {
            c,
            alpha_composite: alpha_witness.is_some(),
            beta_composite: beta_witness.is_some(),
            alpha_witness,
            beta_witness,
        }
    }

    /// Contribution of this index to Λ: one per composite candidate.
    pub fn composites(&self) -> u64 {
        self.alpha_composite as u64 + self.beta_composite as u64
    }

    /// Surviving candidates in ascending order (`6c - 1` first).
    pub fn primes(&self) -> impl Iterator<Item = PrimeRecord> + '_ {
        let beta = (!self.beta_composite).then(|| PrimeRecord {
            c: self.c,
            value: self.c.beta_value(),
            tag: ClassTag::Beta,
        });
        let alpha = (!self.alpha_composite).then(|| PrimeRecord {
            c: self.c,
            value: self.c.alpha_value(),
            tag: ClassTag::Alpha,
        });
        beta.into_iter().chain(alpha)
    }
}

/// A prime found by the scan, reported positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub c: GeneratorIndex,
    pub value: i64,
    pub tag: ClassTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaResult {
    pub c1: GeneratorIndex,
    pub c2: GeneratorIndex,
    /// Number of composite candidates among `6c ± 1`, `c ∈ [c1, c2]`.
    pub l: u64,
    /// Empty unless `primes_emitted`.
    pub primes: Vec<PrimeRecord>,
    pub primes_emitted: bool,
}

impl LambdaResult {
    /// `2(c2 - c1 + 1)`
    pub fn candidate_count(&self) -> u64 {
        2 * (self.c2.get() - self.c1.get() + 1) as u64
    }

    pub fn prime_count(&self) -> u64 {
        self.candidate_count() - self.l
    }
}

/// `⌊(√(1 + 6c) + 1) / 6⌋` and `⌊(√(1 + 6c) - 1) / 6⌋`, exact.
///
/// For real `s ∈ [r, r+1)` with `r = isqrt(n)`, `⌊(s ± 1)/6⌋ = ⌊(r ± 1)/6⌋`
/// since `(r ± 1, r ± 1 + 1)` holds no multiple of 6 in its interior.
fn sqrt_bounds(c: i64) -> (i64, i64) {
    let r = ((6 * c + 1) as u64).isqrt() as i64;
    ((r + 1) / 6, (r - 1) / 6)
}

#[inline]
fn first_divisor_hit(
    lo: i64,
    hi: i64,
    numerator: impl Fn(i64) -> i64,
    branch: ScanBranch,
) -> Option<ScanWitness> {
    (lo..=hi).filter(|&x| x != 0).find_map(|x| {
        let d = 6 * x + 1;
        let n = numerator(x);
        (n % d == 0).then(|| ScanWitness {
            x,
            cofactor: n / d,
            branch,
        })
    })
}

fn assert_positive(c: GeneratorIndex) -> i64 {
    let c = c.get();
    assert!(c >= 1, "scan index must be >= 1, got {c}");
    c
}

/// β·β factorization of `6c + 1`, scanning the large-factor side.
///
/// # Panics
/// If `c < 1`.
pub fn scan_beta_beta(c: GeneratorIndex) -> Option<ScanWitness> {
    let c = assert_positive(c);
    let (upper, _) = sqrt_bounds(c);
    first_divisor_hit(-((c + 1) / 5), -upper, |x| c - x, ScanBranch::BetaBeta)
}

/// α·α factorization of `6c + 1`, scanning the small-factor side.
///
/// # Panics
/// If `c < 1`.
pub fn scan_alpha_alpha(c: GeneratorIndex) -> Option<ScanWitness> {
    let c = assert_positive(c);
    let (_, upper) = sqrt_bounds(c);
    first_divisor_hit(1, upper, |x| c - x, ScanBranch::AlphaAlpha)
}

/// α·β factorization of `6c - 1`.
///
/// # Panics
/// If `c < 1`.
pub fn scan_alpha_beta(c: GeneratorIndex) -> Option<ScanWitness> {
    let c = assert_positive(c);
    first_divisor_hit(-((c + 1) / 7), -1, |x| -c - x, ScanBranch::AlphaBeta)
}

/// Per-index verdict using the three scans in order: β·β, then α·α only if
/// β·β found nothing, then α·β independently.
///
/// # Panics
/// If `c < 1`.
pub fn classify(c: GeneratorIndex) -> CandidateClassification {
    let alpha = scan_beta_beta(c).or_else(|| scan_alpha_alpha(c));
    let beta = scan_alpha_beta(c);
    CandidateClassification::from_witnesses(c, alpha, beta)
}

/// Smallest divisor of `n` among 5, 7, 11, 13, ... not exceeding `√n`.
/// `n` must be coprime to 6.
fn smallest_wheel_divisor(n: u64) -> Option<u64> {
    // Candidates below 2^32 take the much cheaper 32-bit division.
    if let Ok(small) = u32::try_from(n) {
        let mut d = 5u32;
        while u64::from(d) * u64::from(d) <= u64::from(small) {
            for k in [d, d + 2] {
                if small.is_multiple_of(k) && u64::from(k) * u64::from(k) <= u64::from(small) {
                    return Some(u64::from(k));
                }
            }
            d += 6;
        }
        return None;
    }
    let mut d = 5u64;
    while u128::from(d) * u128::from(d) <= u128::from(n) {
        for k in [d, d + 2] {
            if n.is_multiple_of(k) && u128::from(k) * u128::from(k) <= u128::from(n) {
                return Some(k);
            }
        }
        d += 6;
    }
    None
}

/// Writes `value = (6x + 1)(6q + 1)` given one positive divisor `d` of
/// `|value|`, choosing the sign of each factor from its residue.
fn witness_from_divisor(value: i64, d: u64, branch: ScanBranch) -> ScanWitness {
    let d = d as i64;
    let e = value / d;
    // Put a factor congruent to 1 mod 6 (with sign) in each slot.
    let (f1, f2) = match (ClassTag::of(d), branch) {
        (Some(ClassTag::Alpha), ScanBranch::AlphaBeta) => (e, d),
        (Some(ClassTag::Alpha), _) => (d, e),
        _ => (-d, -e),
    };
    ScanWitness {
        x: (f1 - 1) / 6,
        cofactor: (f2 - 1) / 6,
        branch,
    }
}

/// Same verdicts as [`classify`], by trial division of each candidate.
///
/// # Panics
/// If `c < 1`.
pub fn classify_fast(c: GeneratorIndex) -> CandidateClassification {
    assert_positive(c);
    let alpha_value = c.alpha_value();
    let beta_value = c.beta_value();
    let alpha = smallest_wheel_divisor(alpha_value as u64).map(|d| {
        let branch = if ClassTag::of(d as i64) == Some(ClassTag::Alpha) {
            ScanBranch::AlphaAlpha
        } else {
            ScanBranch::BetaBeta
        };
        witness_from_divisor(alpha_value, d, branch)
    });
    let beta = smallest_wheel_divisor(beta_value as u64)
        .map(|d| witness_from_divisor(-beta_value, d, ScanBranch::AlphaBeta));
    CandidateClassification::from_witnesses(c, alpha, beta)
}

/// Adds the contributions of `c ∈ [from, to]` to `l` and, if `primes` is
/// given, appends the surviving candidates. Bounds must already be valid.
pub(crate) fn accumulate(
    from: i64,
    to: i64,
    variant: Variant,
    l: &mut u64,
    mut primes: Option<&mut Vec<PrimeRecord>>,
) {
    for c in from..=to {
        let verdict = variant.classify(GeneratorIndex(c));
        *l += verdict.composites();
        if let Some(out) = primes.as_deref_mut() {
            out.extend(verdict.primes());
        }
    }
}

pub(crate) fn check_interval(c1: GeneratorIndex, c2: GeneratorIndex) -> Result<()> {
    if c1.get() < 1 {
        return Err(Error::Argument(format!("c1 must be >= 1, got {c1}")));
    }
    if c1 > c2 {
        return Err(Error::Argument(format!("c1 ({c1}) exceeds c2 ({c2})")));
    }
    Ok(())
}

/// Λ over `[c1, c2]`, optionally collecting the primes found.
pub fn lambda_range(
    c1: GeneratorIndex,
    c2: GeneratorIndex,
    emit_primes: bool,
    variant: Variant,
) -> Result<LambdaResult> {
    check_interval(c1, c2)?;
    let mut l = 0;
    let mut primes = Vec::new();
    accumulate(
        c1.get(),
        c2.get(),
        variant,
        &mut l,
        emit_primes.then_some(&mut primes),
    );
    Ok(LambdaResult {
        c1,
        c2,
        l,
        primes,
        primes_emitted: emit_primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: i64) -> GeneratorIndex {
        GeneratorIndex::new(v).unwrap()
    }

    #[test]
    fn sqrt_bounds_include_perfect_squares() {
        // 6·4 + 1 = 25: the β·β range must reach x = -1.
        assert_eq!(sqrt_bounds(4), (1, 0));
        // 6·8 + 1 = 49: the α·α range must reach x = 1.
        assert_eq!(sqrt_bounds(8), (1, 1));
        assert_eq!(sqrt_bounds(1), (0, 0));
    }

    #[test]
    fn beta_beta_scan() {
        let w = scan_beta_beta(idx(4)).unwrap();
        assert_eq!((w.x, w.cofactor), (-1, -1));
        assert!(scan_beta_beta(idx(1)).is_none());
        let w = scan_beta_beta(idx(24)).unwrap();
        assert_eq!(w.x, -5);
        assert_eq!(w.factors(), (-29, -5));
        assert!(w.proves(idx(24)));
    }

    #[test]
    fn alpha_alpha_scan() {
        let w = scan_alpha_alpha(idx(8)).unwrap();
        assert_eq!((w.x, w.cofactor), (1, 1));
        assert!(scan_alpha_alpha(idx(2)).is_none());
        assert!(scan_alpha_alpha(idx(68)).is_none());
        let w = scan_alpha_alpha(idx(57)).unwrap();
        assert_eq!(w.x, 1);
        assert_eq!(w.factors(), (7, 49));
    }

    #[test]
    fn alpha_beta_scan() {
        let w = scan_alpha_beta(idx(6)).unwrap();
        assert_eq!((w.x, w.cofactor), (-1, 1));
        let w = scan_alpha_beta(idx(13)).unwrap();
        assert_eq!((w.x, w.cofactor), (-2, 1));
        assert_eq!(w.factors(), (-11, 7));
        assert!(scan_alpha_beta(idx(2)).is_none());
    }

    #[test]
    #[should_panic(expected = "scan index must be >= 1")]
    fn scans_reject_nonpositive_index() {
        scan_alpha_beta(idx(0));
    }

    #[test]
    fn classify_examples() {
        let v = classify(idx(4));
        assert!(v.alpha_composite && !v.beta_composite);
        let v = classify(idx(10));
        assert!(!v.alpha_composite && !v.beta_composite);
        let v = classify(idx(9));
        assert!(v.alpha_composite && !v.beta_composite);
        assert_eq!(v.composites(), 1);
    }

    #[test]
    fn small_indices_skip_zero_divisor() {
        // Without the x = 0 exclusion every c < 8 would be marked composite.
        for c in [1, 2, 3, 5, 6, 7] {
            let v = classify(idx(c));
            assert!(!v.alpha_composite, "6*{c}+1");
        }
        assert!(classify(idx(4)).alpha_composite); // 25
        assert!(!classify(idx(5)).beta_composite);
        assert!(classify(idx(6)).beta_composite); // 35
    }

    #[test]
    fn fast_examples_and_witnesses() {
        let v = classify_fast(idx(8));
        assert!(v.alpha_composite && !v.beta_composite);
        assert!(v.alpha_witness.unwrap().proves(idx(8)));
        let v = classify_fast(idx(1));
        assert_eq!(v.composites(), 0);
        for c in [4, 6, 9, 13, 24, 57, 1_000_000, 5_000_000_017] {
            let v = classify_fast(idx(c));
            for w in v.alpha_witness.iter().chain(v.beta_witness.iter()) {
                assert!(w.proves(idx(c)), "c = {c}, {w:?}");
            }
        }
    }

    #[test]
    fn fast_handles_wide_candidates() {
        // Past u32: 6_000_000_001 is prime, 5_999_999_999 = 7 · 1483 · 577979.
        let c = idx(1_000_000_000);
        let v = classify_fast(c);
        assert!(!v.alpha_composite && v.beta_composite);
        assert!(v.beta_witness.unwrap().proves(c));
        // 6_000_000_037 = 5² · 19 · 47 · 268757
        let c = idx(1_000_000_004);
        let v = classify_fast(c);
        assert_eq!(v.alpha_witness.unwrap().branch, ScanBranch::BetaBeta);
        assert!(v.alpha_witness.unwrap().proves(c));
    }

    #[test]
    fn lambda_examples() {
        let r = lambda_range(idx(8), idx(8), true, Variant::Faithful).unwrap();
        assert_eq!(r.l, 1);
        assert_eq!(
            r.primes.iter().map(|p| p.value).collect::<Vec<_>>(),
            vec![47]
        );

        let r = lambda_range(idx(8), idx(17), true, Variant::Faithful).unwrap();
        assert_eq!(r.l, 7);
        assert_eq!(
            r.primes.iter().map(|p| p.value).collect::<Vec<_>>(),
            vec![47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103]
        );

        let r = lambda_range(idx(10), idx(10), true, Variant::Fast).unwrap();
        assert_eq!(r.l, 0);
        assert_eq!(
            r.primes.iter().map(|p| p.tag).collect::<Vec<_>>(),
            vec![ClassTag::Beta, ClassTag::Alpha]
        );
    }

    #[test]
    fn lambda_argument_errors() {
        assert!(matches!(
            lambda_range(idx(17), idx(8), false, Variant::Fast),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            lambda_range(idx(0), idx(8), false, Variant::Fast),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn suppressed_primes() {
        let r = lambda_range(idx(8), idx(17), false, Variant::Fast).unwrap();
        assert!(r.primes.is_empty());
        assert_eq!(r.prime_count(), 13);
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("FAST".parse::<Variant>().unwrap(), Variant::Fast);
        assert_eq!("faithful".parse::<Variant>().unwrap(), Variant::Faithful);
        assert!("quick".parse::<Variant>().is_err());
    }
}
