//! UMPS → communication delays with unbounded machines.
//!
//! Each UMPS job `l` becomes a job `j'_l` of the same length. Each machine
//! `i` gets a unit dummy `j*_i` that succeeds every job of `J(i)` through an
//! edge with delay `C_∞ = n · Σ p`; original precedences carry delay 0. Any
//! schedule shorter than `C_∞` must then keep `J'(i) ∪ {j*_i}` on one machine.

use crate::error::{Error, Result};
use crate::model::{
    validate_commdelay, validate_umps, CommDelayInstance, Machines, PrecedenceDag, Schedule, ScheduledJob,
    UmpsInstance,
};
use crate::rational::{self, int};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommDelayReductionArtifact {
    pub source: UmpsInstance,
    pub output: CommDelayInstance,
    pub c_infinity: u64,
    /// `dummy_ids[i]` is the output job standing for machine `i`.
    pub dummy_ids: Vec<usize>,
    /// `origin[j]` is the source job of non-dummy output job `j`.
    pub origin: Vec<usize>,
}

impl CommDelayReductionArtifact {
    pub fn is_dummy(&self, job: usize) -> bool {
        job >= self.origin.len()
    }
}

pub fn umps_to_commdelay(inst: &UmpsInstance) -> Result<CommDelayReductionArtifact> {
    let n = inst.n();
    let m = inst.m();
    if n < 2 {
        return Err(Error::DegenerateInstance(format!(
            "need at least 2 jobs for the co-location delay to dominate, got {n}"
        )));
    }
    let c_infinity = (n as u64)
        .checked_mul(inst.total_length())
        .ok_or_else(|| Error::Overflow("C_inf".into()))?;

    let mut lengths = inst.lengths().to_vec();
    lengths.extend(std::iter::repeat_n(1, m));
    let mut edges = inst.dag().edges().to_vec();
    let mut delays = vec![0u64; edges.len()];
    let dummy_ids: Vec<usize> = (0..m).map(|i| n + i).collect();
    for (i, &dummy) in dummy_ids.iter().enumerate() {
        for l in inst.jobs_on(i) {
            edges.push((l, dummy));
            delays.push(c_infinity);
        }
    }
    let dag = PrecedenceDag::new(n + m, edges)?;
    let output = CommDelayInstance::new(lengths, dag, delays, Machines::Unbounded)?;
    Ok(CommDelayReductionArtifact {
        source: inst.clone(),
        output,
        c_infinity,
        dummy_ids,
        origin: (0..n).collect(),
    })
}

/// Completeness direction: a UMPS schedule of makespan `L` becomes a
/// delay schedule of makespan `L + 1` with all dummies in `[L, L + 1]`.
pub fn forward_map_commdelay(art: &CommDelayReductionArtifact, sched: &Schedule) -> Result<Schedule> {
    let report = validate_umps(&art.source, sched)?;
    if !report.feasible() {
        return Err(Error::InfeasibleInput(report.to_string()));
    }
    let makespan = sched.makespan()?;
    let mut entries: Vec<ScheduledJob> = sched.entries().to_vec();
    for (i, &dummy) in art.dummy_ids.iter().enumerate() {
        entries.push(ScheduledJob { job: dummy, machine: i, start: makespan, end: makespan + int(1) });
    }
    Ok(Schedule::new(entries))
}

/// Soundness direction: reads a UMPS schedule off a delay schedule whose
/// makespan is below `C_∞`.
pub fn backward_map_commdelay(art: &CommDelayReductionArtifact, sched: &Schedule) -> Result<Schedule> {
    let report = validate_commdelay(&art.output, sched)?;
    if !report.feasible() {
        return Err(Error::InfeasibleInput(report.to_string()));
    }
    let makespan = sched.makespan()?;
    if makespan >= int(art.c_infinity as i128) {
        return Err(Error::MakespanTooLarge {
            makespan: rational::format(&makespan),
            c_infinity: art.c_infinity,
        });
    }
    let at = |j: usize| &sched.entries()[j];
    for (i, &dummy) in art.dummy_ids.iter().enumerate() {
        let anchor = at(dummy).machine;
        if let Some(l) = art.source.jobs_on(i).into_iter().find(|&l| at(l).machine != anchor) {
            return Err(Error::CoLocationViolated { machine: i, first: l, second: dummy });
        }
    }
    let entries = (0..art.source.n())
        .map(|l| {
            let e = at(l);
            ScheduledJob { job: art.origin[l], machine: art.source.home(art.origin[l]), start: e.start, end: e.end }
        })
        .collect();
    Ok(Schedule::new(entries))
}
