//! On-disk progress for long parallel Λ runs.
//!
//! A checkpoint file is JSON lines: one `plan` record followed by one
//! `assignment` record per worker, in worker order. Files are replaced
//! atomically by writing a sibling temp file and renaming it over the target.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::Variant;
use crate::parallel::RangeAssignment;
use crate::residue::GeneratorIndex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentProgress {
    pub worker: u64,
    pub start: GeneratorIndex,
    pub end: GeneratorIndex,
    /// First index not yet accounted for; `end + 1` once the worker is done.
    pub next_c: i64,
    pub partial_l: u64,
}

impl AssignmentProgress {
    pub fn fresh(assignment: &RangeAssignment) -> Self {
        AssignmentProgress {
            worker: assignment.worker_ordinal,
            start: assignment.start,
            end: assignment.end,
            next_c: assignment.start.get(),
            partial_l: 0,
        }
    }

    pub fn is_done(&self) -> bool {
        self.next_c > self.end.get()
    }

    /// Indices already folded into `partial_l`.
    pub fn completed(&self) -> u64 {
        (self.next_c - self.start.get()) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub plan_id: String,
    pub c1: GeneratorIndex,
    pub c2: GeneratorIndex,
    pub parts: u64,
    pub variant: Variant,
    pub assignments: Vec<AssignmentProgress>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Line {
    Plan {
        plan_id: String,
        c1: GeneratorIndex,
        c2: GeneratorIndex,
        parts: u64,
        variant: Variant,
    },
    Assignment(AssignmentProgress),
}

/// Identifier tying a checkpoint to the exact plan that produced it.
pub fn plan_id(c1: GeneratorIndex, c2: GeneratorIndex, parts: u64, variant: Variant) -> String {
    format!("lambda:{c1}:{c2}:{parts}:{variant}")
}

impl Checkpoint {
    pub fn fresh(
        c1: GeneratorIndex,
        c2: GeneratorIndex,
        variant: Variant,
        plan: &[RangeAssignment],
    ) -> Self {
        let parts = plan.len() as u64;
        Checkpoint {
            plan_id: plan_id(c1, c2, parts, variant),
            c1,
            c2,
            parts,
            variant,
            assignments: plan.iter().map(AssignmentProgress::fresh).collect(),
        }
    }

    pub fn total_l(&self) -> u64 {
        self.assignments.iter().map(|a| a.partial_l).sum()
    }

    pub fn completed(&self) -> u64 {
        self.assignments
            .iter()
            .map(AssignmentProgress::completed)
            .sum()
    }

    pub fn is_done(&self) -> bool {
        self.assignments.iter().all(AssignmentProgress::is_done)
    }

    /// Rejects a checkpoint that belongs to another plan or whose progress
    /// lies outside its assignments.
    pub fn validate_against(
        &self,
        c1: GeneratorIndex,
        c2: GeneratorIndex,
        variant: Variant,
        plan: &[RangeAssignment],
    ) -> Result<()> {
        let expected = plan_id(c1, c2, plan.len() as u64, variant);
        if self.plan_id != expected
            || self.c1 != c1
            || self.c2 != c2
            || self.parts != plan.len() as u64
            || self.variant != variant
        {
            return Err(Error::Integrity(format!(
                "checkpoint is for plan {}, not {expected}",
                self.plan_id
            )));
        }
        if self.assignments.len() != plan.len() {
            return Err(Error::Integrity(format!(
                "checkpoint has {} assignments, plan has {}",
                self.assignments.len(),
                plan.len()
            )));
        }
        for (saved, planned) in self.assignments.iter().zip(plan) {
            if saved.worker != planned.worker_ordinal
                || saved.start != planned.start
                || saved.end != planned.end
            {
                return Err(Error::Integrity(format!(
                    "assignment {} is [{}, {}], plan expects [{}, {}]",
                    saved.worker, saved.start, saved.end, planned.start, planned.end
                )));
            }
            if saved.next_c < saved.start.get() || saved.next_c > saved.end.get() + 1 {
                return Err(Error::Integrity(format!(
                    "assignment {} next_c {} outside [{}, {}]",
                    saved.worker,
                    saved.next_c,
                    saved.start,
                    saved.end.get() + 1
                )));
            }
            if saved.partial_l > 2 * saved.completed() {
                return Err(Error::Integrity(format!(
                    "assignment {} claims {} composites over {} indices",
                    saved.worker,
                    saved.partial_l,
                    saved.completed()
                )));
            }
        }
        Ok(())
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        let head = Line::Plan {
            plan_id: self.plan_id.clone(),
            c1: self.c1,
            c2: self.c2,
            parts: self.parts,
            variant: self.variant,
        };
        out.push_str(&serde_json::to_string(&head).expect("plan record serializes"));
        out.push('\n');
        for a in &self.assignments {
            out.push_str(
                &serde_json::to_string(&Line::Assignment(a.clone()))
                    .expect("assignment record serializes"),
            );
            out.push('\n');
        }
        out
    }

    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines().filter(|l| match l {
            Ok(l) => !l.trim().is_empty(),
            Err(_) => true,
        });
        let first = lines
            .next()
            .ok_or_else(|| Error::Integrity("empty checkpoint".into()))??;
        let Line::Plan {
            plan_id,
            c1,
            c2,
            parts,
            variant,
        } = parse_line(&first)?
        else {
            return Err(Error::Integrity(
                "checkpoint must start with a plan record".into(),
            ));
        };
        let mut assignments = Vec::new();
        for line in lines {
            match parse_line(&line?)? {
                Line::Assignment(a) => assignments.push(a),
                Line::Plan { .. } => {
                    return Err(Error::Integrity("duplicate plan record".into()));
                }
            }
        }
        Ok(Checkpoint {
            plan_id,
            c1,
            c2,
            parts,
            variant,
            assignments,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path)?;
        Checkpoint::parse(BufReader::new(file))
    }

    /// Writes to `<path>.tmp`, syncs, then renames over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = temp_path(path);
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(self.to_lines().as_bytes())?;
            file.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn parse_line(line: &str) -> Result<Line> {
    serde_json::from_str(line).map_err(|e| Error::Integrity(format!("bad checkpoint record: {e}")))
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::partition;

    fn idx(v: i64) -> GeneratorIndex {
        GeneratorIndex::new(v).unwrap()
    }

    fn sample() -> (Checkpoint, Vec<RangeAssignment>) {
        let plan = partition(idx(8), idx(107), 4).unwrap();
        let mut cp = Checkpoint::fresh(idx(8), idx(107), Variant::Fast, &plan);
        cp.assignments[1].next_c = 40;
        cp.assignments[1].partial_l = 5;
        (cp, plan)
    }

    #[test]
    fn text_round_trip() {
        let (cp, plan) = sample();
        let text = cp.to_lines();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with(r#"{"record":"plan","plan_id":"lambda:8:107:4:fast""#));
        let back = Checkpoint::parse(text.as_bytes()).unwrap();
        assert_eq!(back, cp);
        back.validate_against(idx(8), idx(107), Variant::Fast, &plan)
            .unwrap();
    }

    #[test]
    fn save_is_atomic_rename() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        let (cp, _) = sample();
        cp.save(&path).unwrap();
        assert!(!dir.path().join("run.ckpt.tmp").exists());
        assert_eq!(Checkpoint::load(&path).unwrap(), cp);
    }

    #[test]
    fn mismatched_plan_is_rejected() {
        let (cp, _) = sample();
        let other = partition(idx(8), idx(107), 4).unwrap();
        assert!(matches!(
            cp.validate_against(idx(8), idx(107), Variant::Faithful, &other),
            Err(Error::Integrity(_))
        ));
        let other = partition(idx(8), idx(107), 5).unwrap();
        assert!(matches!(
            cp.validate_against(idx(8), idx(107), Variant::Fast, &other),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn out_of_range_progress_is_rejected() {
        let (mut cp, plan) = sample();
        cp.assignments[0].next_c = 34;
        assert!(matches!(
            cp.validate_against(idx(8), idx(107), Variant::Fast, &plan),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(
            Checkpoint::parse(&b""[..]),
            Err(Error::Integrity(_))
        ));
        assert!(matches!(
            Checkpoint::parse(&b"{nope"[..]),
            Err(Error::Integrity(_))
        ));
        let (cp, _) = sample();
        let doubled = format!("{}{}", cp.to_lines(), cp.to_lines());
        assert!(matches!(
            Checkpoint::parse(doubled.as_bytes()),
            Err(Error::Integrity(_))
        ));
    }
}
