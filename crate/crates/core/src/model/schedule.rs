use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledJob {
    pub job: usize,
    pub machine: usize,
    pub start: Rational,
    pub end: Rational,
}

/// Per-job `(machine, start, end)` assignments, kept sorted by job index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    entries: Vec<ScheduledJob>,
}

impl Schedule {
    pub fn new(mut entries: Vec<ScheduledJob>) -> Self {
        entries.sort_by_key(|e| e.job);
        Schedule { entries }
    }

    pub fn entries(&self) -> &[ScheduledJob] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, job: usize) -> Option<&ScheduledJob> {
        self.entries
            .binary_search_by_key(&job, |e| e.job)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Latest end time.
    pub fn makespan(&self) -> Result<Rational> {
        self.entries.iter().map(|e| e.end).max().ok_or(Error::EmptySchedule)
    }

    /// Every start and end is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries
            .iter()
            .all(|e| rational::is_integer(&e.start) && rational::is_integer(&e.end))
    }

    pub fn shifted(&self, by: Rational) -> Schedule {
        Schedule {
            entries: self
                .entries
                .iter()
                .map(|e| ScheduledJob {
                    start: e.start + by,
                    end: e.end + by,
                    ..*e
                })
                .collect(),
        }
    }

    /// Fails unless the schedule holds exactly jobs `0..n`, once each.
    pub fn check_job_set(&self, n: usize) -> Result<()> {
        if self.entries.len() != n {
            return Err(Error::JobSetMismatch(format!(
                "{} entries for {} jobs",
                self.entries.len(),
                n
            )));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if e.job != i {
                return Err(Error::JobSetMismatch(format!("expected job {i}, found job {}", e.job)));
            }
        }
        Ok(())
    }

    /// Jobs grouped per machine, each list sorted by start time.
    pub fn by_machine(&self) -> BTreeMap<usize, Vec<ScheduledJob>> {
        let mut map: BTreeMap<usize, Vec<ScheduledJob>> = BTreeMap::new();
        for e in &self.entries {
            map.entry(e.machine).or_default().push(*e);
        }
        for list in map.values_mut() {
            list.sort_by_key(|a| (a.start, a.end, a.job));
        }
        map
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Overlap,
    Precedence,
    Delay,
    WrongMachine,
    NegativeTime,
    Duration,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Overlap => "overlap",
            ViolationKind::Precedence => "precedence",
            ViolationKind::Delay => "delay",
            ViolationKind::WrongMachine => "wrong_machine",
            ViolationKind::NegativeTime => "negative_time",
            ViolationKind::Duration => "duration",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub job: usize,
    /// Second job of the witness pair, for pairwise violations.
    pub other: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.other {
            Some(o) => write!(f, "{} ({}, {})", self.kind, self.job + 1, o + 1),
            None => write!(f, "{} ({})", self.kind, self.job + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind, job: usize, other: Option<usize>) -> bool {
        self.violations.contains(&Violation { kind, job, other })
    }

    pub(crate) fn push(&mut self, kind: ViolationKind, job: usize, other: Option<usize>) {
        self.violations.push(Violation { kind, job, other });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible() {
            return f.write_str("feasible");
        }
        write!(f, "infeasible:")?;
        for v in &self.violations {
            write!(f, " {v};")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn job(job: usize, machine: usize, start: i128, end: i128) -> ScheduledJob {
        ScheduledJob { job, machine, start: int(start), end: int(end) }
    }

    #[test]
    fn makespan_is_max_end() {
        assert_eq!(Schedule::new(vec![job(0, 0, 0, 1)]).makespan().unwrap(), int(1));
        let s = Schedule::new(vec![job(1, 0, 4, 7), job(0, 1, 0, 3)]);
        assert_eq!(s.makespan().unwrap(), int(7));
        assert_eq!(Schedule::default().makespan(), Err(Error::EmptySchedule));
    }

    #[test]
    fn job_set_check() {
        let s = Schedule::new(vec![job(1, 0, 0, 1), job(0, 0, 1, 2)]);
        assert!(s.check_job_set(2).is_ok());
        assert!(s.check_job_set(3).is_err());
        let dup = Schedule::new(vec![job(0, 0, 0, 1), job(0, 0, 1, 2)]);
        assert!(dup.check_job_set(2).is_err());
    }
}
