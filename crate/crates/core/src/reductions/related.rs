//! UMPS (unit lengths) → related machines by κ-replication.
//!
//! Job `l` becomes a group of `κ^{2(m−M(l))}` jobs of length `κ^{M(l)−1}`;
//! machine `i` becomes a group of `κ^{2(m−i)}` machines of speed `κ^{i−1}`
//! (1-based machine numbers). A job group and its home machine group have
//! equal size, and a member runs in unit time at home.
//!
//! At the default `κ = 10 n³ m` these groups are astronomically large, so
//! instances and schedules stay in grouped form; [`materialize`] expands
//! them only for small override values.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    validate_umps, GroupedRelatedInstance, JobGroup, MachineGroup, PrecedenceDag, RelatedInstance, Schedule,
    ScheduledJob, UmpsInstance, ValidationReport, ViolationKind,
};
use crate::rational::{int, Rational};

/// Upper bound on materialized jobs (and machines).
pub const MATERIALIZE_LIMIT: u128 = 1_000_000;
const EDGE_LIMIT: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatedReductionArtifact {
    pub source: UmpsInstance,
    pub output: GroupedRelatedInstance,
    pub kappa: u128,
    /// `κ ≥ 10 n³ m`, the precondition of the misplacement bound.
    pub sound_kappa: bool,
    /// Job group → source job.
    pub origin: Vec<usize>,
    /// Source machine → machine group.
    pub machine_group_of: Vec<usize>,
}

pub fn default_kappa(n: usize, m: usize) -> Result<u128> {
    let n = n as u128;
    n.checked_pow(3)
        .and_then(|c| c.checked_mul(10))
        .and_then(|c| c.checked_mul(m as u128))
        .ok_or_else(|| Error::Overflow("kappa".into()))
}

fn kpow(kappa: u128, exp: usize) -> Result<u128> {
    kappa
        .checked_pow(exp as u32)
        .ok_or_else(|| Error::Overflow(format!("kappa^{exp}")))
}

pub fn umps_to_related(inst: &UmpsInstance, kappa_override: Option<u128>) -> Result<RelatedReductionArtifact> {
    if let Some(l) = (0..inst.n()).find(|&l| inst.length(l) != 1) {
        return Err(Error::NonUnitLengths(l));
    }
    let sound = default_kappa(inst.n(), inst.m())?;
    let kappa = match kappa_override {
        Some(k) if k < 2 => return Err(Error::InvalidInstance(format!("kappa override {k} < 2"))),
        Some(k) => k,
        None => sound,
    };
    let m = inst.m();
    // 0-based home h corresponds to machine h + 1.
    let job_groups = (0..inst.n())
        .map(|l| {
            let h = inst.home(l);
            Ok(JobGroup {
                multiplicity: kpow(kappa, 2 * (m - 1 - h))?,
                length: kpow(kappa, h)?,
                origin_job: l,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let machine_groups = (0..m)
        .map(|i| Ok(MachineGroup { multiplicity: kpow(kappa, 2 * (m - 1 - i))?, speed: kpow(kappa, i)? }))
        .collect::<Result<Vec<_>>>()?;
    let group_dag = PrecedenceDag::new(inst.n(), inst.dag().edges().to_vec())?;
    Ok(RelatedReductionArtifact {
        source: inst.clone(),
        output: GroupedRelatedInstance::new(job_groups, machine_groups, group_dag)?,
        kappa,
        sound_kappa: kappa >= sound,
        origin: (0..inst.n()).collect(),
        machine_group_of: (0..m).collect(),
    })
}

impl RelatedReductionArtifact {
    /// Checks `|𝒥_l| = |ℳ_{M(l)}|` and `length(𝒥_l) / speed(ℳ_{M(l)}) = 1`
    /// for every job, without expanding anything.
    pub fn load_identities_hold(&self) -> bool {
        self.output.job_groups().iter().enumerate().all(|(g, jg)| {
            let mg = &self.output.machine_groups()[self.machine_group_of[self.source.home(self.origin[g])]];
            jg.multiplicity == mg.multiplicity && jg.length == mg.speed
        })
    }
}

/// `count` members of job group `group` run simultaneously on distinct
/// machines of `machine_group` during `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupPlacement {
    pub group: usize,
    pub machine_group: usize,
    pub start: Rational,
    pub end: Rational,
    pub count: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupedSchedule {
    pub placements: Vec<GroupPlacement>,
}

impl GroupedSchedule {
    pub fn makespan(&self) -> Result<Rational> {
        self.placements.iter().map(|p| p.end).max().ok_or(Error::EmptySchedule)
    }
}

/// Symbolic feasibility check of a grouped schedule. Violation indices
/// refer to job groups; overlap violations carry the machine group as
/// `other`. Capacity is checked by counting concurrently running members per
/// machine group, which suffices since machines inside a group are identical.
pub fn validate_grouped(inst: &GroupedRelatedInstance, gs: &GroupedSchedule) -> Result<ValidationReport> {
    let groups = inst.job_groups().len();
    let mut counts = vec![0u128; groups];
    for p in &gs.placements {
        if p.group >= groups || p.count == 0 {
            return Err(Error::JobSetMismatch(format!("bad placement for group {}", p.group)));
        }
        if p.machine_group >= inst.machine_groups().len() {
            return Err(Error::MachineOutOfRange { job: p.group, machine: p.machine_group });
        }
        counts[p.group] = counts[p.group]
            .checked_add(p.count)
            .ok_or_else(|| Error::Overflow("placement counts".into()))?;
    }
    if let Some(g) = (0..groups).find(|&g| counts[g] != inst.job_groups()[g].multiplicity) {
        return Err(Error::JobSetMismatch(format!(
            "group {g} has {} placed members, expected {}",
            counts[g],
            inst.job_groups()[g].multiplicity
        )));
    }

    let mut report = ValidationReport::default();
    for p in &gs.placements {
        if p.start < int(0) {
            report.push(ViolationKind::NegativeTime, p.group, None);
        }
        if p.end - p.start != inst.duration(p.group, p.machine_group)? {
            report.push(ViolationKind::Duration, p.group, None);
        }
    }

    let mut per_group: BTreeMap<usize, Vec<&GroupPlacement>> = BTreeMap::new();
    for p in &gs.placements {
        per_group.entry(p.machine_group).or_default().push(p);
    }
    for (&h, list) in &per_group {
        // (time, is_start, delta, group): ends sort before starts at equal times
        let mut events: Vec<(Rational, bool, u128, usize)> = Vec::with_capacity(2 * list.len());
        for p in list {
            events.push((p.start, true, p.count, p.group));
            events.push((p.end, false, p.count, p.group));
        }
        events.sort();
        let cap = inst.machine_groups()[h].multiplicity;
        let mut load: u128 = 0;
        for (_, is_start, delta, g) in events {
            if is_start {
                load += delta;
                if load > cap {
                    report.push(ViolationKind::Overlap, g, Some(h));
                }
            } else {
                load -= delta;
            }
        }
    }

    let mut first_start: Vec<Option<Rational>> = vec![None; groups];
    let mut last_end: Vec<Option<Rational>> = vec![None; groups];
    for p in &gs.placements {
        let s = &mut first_start[p.group];
        *s = Some(s.map_or(p.start, |v| v.min(p.start)));
        let e = &mut last_end[p.group];
        *e = Some(e.map_or(p.end, |v| v.max(p.end)));
    }
    for &(u, v) in inst.group_dag().edges() {
        if last_end[u] > first_start[v] {
            report.push(ViolationKind::Precedence, u, Some(v));
        }
    }
    Ok(report)
}

/// Completeness direction: group `𝒥_l` fills machine group `ℳ_{M(l)}`
/// during job `l`'s slot.
pub fn forward_map_related(art: &RelatedReductionArtifact, sched: &Schedule) -> Result<GroupedSchedule> {
    let report = validate_umps(&art.source, sched)?;
    if !report.feasible() {
        return Err(Error::InfeasibleInput(report.to_string()));
    }
    let placements = sched
        .entries()
        .iter()
        .map(|e| {
            let g = e.job;
            let h = art.machine_group_of[art.source.home(art.origin[g])];
            Ok(GroupPlacement {
                group: g,
                machine_group: h,
                start: e.start,
                end: e.start + art.output.duration(g, h)?,
                count: art.output.job_groups()[g].multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupedSchedule { placements })
}

/// Explicit related-machines instance expanded from a grouped one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Materialized {
    pub instance: RelatedInstance,
    /// First job index of each job group.
    pub job_offset: Vec<usize>,
    /// First machine index of each machine group.
    pub machine_offset: Vec<usize>,
}

fn to_u64(v: u128, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Overflow(what.into()))
}

pub fn materialize(inst: &GroupedRelatedInstance) -> Result<Materialized> {
    let jobs = inst.total_jobs().ok_or_else(|| Error::Overflow("job count".into()))?;
    let machines = inst.total_machines().ok_or_else(|| Error::Overflow("machine count".into()))?;
    if jobs > MATERIALIZE_LIMIT || machines > MATERIALIZE_LIMIT {
        return Err(Error::TooLarge(format!("{jobs} jobs on {machines} machines")));
    }
    let sizes: Vec<u128> = inst.job_groups().iter().map(|g| g.multiplicity).collect();
    let edge_total = inst
        .group_dag()
        .edges()
        .iter()
        .try_fold(0u128, |acc, &(u, v)| sizes[u].checked_mul(sizes[v]).and_then(|e| acc.checked_add(e)))
        .ok_or_else(|| Error::Overflow("edge count".into()))?;
    if edge_total > EDGE_LIMIT {
        return Err(Error::TooLarge(format!("{edge_total} expanded precedences")));
    }

    let mut job_offset = Vec::with_capacity(sizes.len());
    let mut lengths = Vec::with_capacity(jobs as usize);
    for g in inst.job_groups() {
        job_offset.push(lengths.len());
        let len = to_u64(g.length, "job length")?;
        lengths.extend(std::iter::repeat_n(len, g.multiplicity as usize));
    }
    let mut machine_offset = Vec::new();
    let mut speeds = Vec::with_capacity(machines as usize);
    for h in inst.machine_groups() {
        machine_offset.push(speeds.len());
        let s = to_u64(h.speed, "speed")?;
        speeds.extend(std::iter::repeat_n(s, h.multiplicity as usize));
    }
    let mut edges = Vec::with_capacity(edge_total as usize);
    for &(u, v) in inst.group_dag().edges() {
        for a in 0..sizes[u] as usize {
            for b in 0..sizes[v] as usize {
                edges.push((job_offset[u] + a, job_offset[v] + b));
            }
        }
    }
    let dag = PrecedenceDag::new(lengths.len(), edges)?;
    Ok(Materialized { instance: RelatedInstance::new(speeds, lengths, dag)?, job_offset, machine_offset })
}

/// Assigns every placed member to a concrete machine by interval
/// partitioning inside each machine group (earliest start first, lowest
/// free machine index).
pub fn materialize_schedule(inst: &GroupedRelatedInstance, mat: &Materialized, gs: &GroupedSchedule) -> Result<Schedule> {
    let report = validate_grouped(inst, gs)?;
    if !report.feasible() {
        return Err(Error::InfeasibleInput(report.to_string()));
    }
    let mut order: Vec<&GroupPlacement> = gs.placements.iter().collect();
    order.sort_by_key(|a| (a.machine_group, a.start, a.group));
    let mut avail: Vec<Vec<Rational>> = inst
        .machine_groups()
        .iter()
        .map(|h| vec![int(0); h.multiplicity as usize])
        .collect();
    let mut next_member = vec![0usize; inst.job_groups().len()];
    let mut entries = Vec::with_capacity(mat.instance.n());
    for p in order {
        let free = &mut avail[p.machine_group];
        let mut placed = 0u128;
        for (k, t) in free.iter_mut().enumerate() {
            if placed == p.count {
                break;
            }
            if *t <= p.start {
                *t = p.end;
                let job = mat.job_offset[p.group] + next_member[p.group];
                next_member[p.group] += 1;
                entries.push(ScheduledJob {
                    job,
                    machine: mat.machine_offset[p.machine_group] + k,
                    start: p.start,
                    end: p.end,
                });
                placed += 1;
            }
        }
        if placed < p.count {
            return Err(Error::InfeasibleInput(format!("machine group {} over capacity", p.machine_group)));
        }
    }
    Ok(Schedule::new(entries))
}
