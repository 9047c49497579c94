//! Feasibility validators. All comparisons are exact.

use crate::error::{Error, Result};
use crate::model::instance::{CommDelayInstance, Machines, RelatedInstance, UmpsInstance};
use crate::model::schedule::{Schedule, ScheduledJob, ValidationReport, ViolationKind};
use crate::rational::{int, Rational};

fn check_times(sched: &Schedule, duration: impl Fn(&ScheduledJob) -> Rational, report: &mut ValidationReport) {
    for e in sched.entries() {
        if e.start < int(0) {
            report.push(ViolationKind::NegativeTime, e.job, None);
        }
        if e.end - e.start != duration(e) {
            report.push(ViolationKind::Duration, e.job, None);
        }
    }
}

/// Sweeps each machine's jobs in start order against the job with the
/// latest end seen so far.
fn check_overlaps(sched: &Schedule, report: &mut ValidationReport) {
    for list in sched.by_machine().values() {
        let mut reach: Option<&ScheduledJob> = None;
        for e in list {
            if let Some(r) = reach {
                if e.start < r.end {
                    let (a, b) = (r.job.min(e.job), r.job.max(e.job));
                    report.push(ViolationKind::Overlap, a, Some(b));
                }
                if e.end > r.end {
                    reach = Some(e);
                }
            } else {
                reach = Some(e);
            }
        }
    }
}

pub fn validate_umps(inst: &UmpsInstance, sched: &Schedule) -> Result<ValidationReport> {
    sched.check_job_set(inst.n())?;
    let mut report = ValidationReport::default();
    check_times(sched, |e| int(inst.length(e.job) as i128), &mut report);
    for e in sched.entries() {
        if e.machine != inst.home(e.job) {
            report.push(ViolationKind::WrongMachine, e.job, None);
        }
    }
    check_overlaps(sched, &mut report);
    let at = |j: usize| &sched.entries()[j];
    for &(u, v) in inst.dag().edges() {
        if at(u).end > at(v).start {
            report.push(ViolationKind::Precedence, u, Some(v));
        }
    }
    Ok(report)
}

pub fn validate_commdelay(inst: &CommDelayInstance, sched: &Schedule) -> Result<ValidationReport> {
    sched.check_job_set(inst.n_total())?;
    if let Machines::Bounded(m) = inst.machines() {
        if let Some(e) = sched.entries().iter().find(|e| e.machine >= m) {
            return Err(Error::MachineOutOfRange { job: e.job, machine: e.machine });
        }
    }
    let mut report = ValidationReport::default();
    check_times(sched, |e| int(inst.length(e.job) as i128), &mut report);
    check_overlaps(sched, &mut report);
    let at = |j: usize| &sched.entries()[j];
    for (u, v, c) in inst.delay_edges() {
        let (a, b) = (at(u), at(v));
        if a.machine == b.machine {
            if a.end > b.start {
                report.push(ViolationKind::Precedence, u, Some(v));
            }
        } else if a.end + int(c as i128) > b.start {
            let kind = if a.end > b.start { ViolationKind::Precedence } else { ViolationKind::Delay };
            report.push(kind, u, Some(v));
        }
    }
    Ok(report)
}

pub fn validate_related(inst: &RelatedInstance, sched: &Schedule) -> Result<ValidationReport> {
    sched.check_job_set(inst.n())?;
    if let Some(e) = sched.entries().iter().find(|e| e.machine >= inst.m()) {
        return Err(Error::MachineOutOfRange { job: e.job, machine: e.machine });
    }
    let mut report = ValidationReport::default();
    check_times(sched, |e| inst.duration(e.job, e.machine), &mut report);
    check_overlaps(sched, &mut report);
    let at = |j: usize| &sched.entries()[j];
    for &(u, v) in inst.dag().edges() {
        if at(u).end > at(v).start {
            report.push(ViolationKind::Precedence, u, Some(v));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dag::PrecedenceDag;
    use crate::fixtures::{example_umps, example_schedule};
    use crate::rational::frac;

    fn job(job: usize, machine: usize, start: Rational, end: Rational) -> ScheduledJob {
        ScheduledJob { job, machine, start, end }
    }

    #[test]
    fn example_schedule_is_feasible() {
        let r = validate_umps(&example_umps(), &example_schedule()).unwrap();
        assert!(r.feasible(), "{r}");
        assert_eq!(example_schedule().makespan().unwrap(), int(5));
    }

    #[test]
    fn single_unit_job() {
        let inst = UmpsInstance::unit(1, vec![0], vec![]).unwrap();
        let s = Schedule::new(vec![job(0, 0, int(0), int(1))]);
        assert!(validate_umps(&inst, &s).unwrap().feasible());
    }

    #[test]
    fn example_early_start_breaks_precedence() {
        // job 5 (index 4) moved to start at 3, before job 1 ends at 4
        let mut entries = example_schedule().entries().to_vec();
        entries[4].start = int(3);
        entries[4].end = int(4);
        let r = validate_umps(&example_umps(), &Schedule::new(entries)).unwrap();
        assert!(r.has(ViolationKind::Precedence, 0, Some(4)), "{r}");
    }

    #[test]
    fn umps_wrong_machine_and_mismatch() {
        let inst = UmpsInstance::unit(2, vec![0, 1], vec![]).unwrap();
        let s = Schedule::new(vec![job(0, 1, int(0), int(1)), job(1, 1, int(1), int(2))]);
        let r = validate_umps(&inst, &s).unwrap();
        assert!(r.has(ViolationKind::WrongMachine, 0, None));
        let short = Schedule::new(vec![job(0, 0, int(0), int(1))]);
        assert!(matches!(validate_umps(&inst, &short), Err(Error::JobSetMismatch(_))));
    }

    fn two_jobs_delay(c: u64) -> CommDelayInstance {
        let dag = PrecedenceDag::new(2, vec![(0, 1)]).unwrap();
        CommDelayInstance::uniform(vec![1, 1], dag, c, Machines::Unbounded).unwrap()
    }

    #[test]
    fn colocation_hides_delay() {
        let s = Schedule::new(vec![job(0, 0, int(0), int(1)), job(1, 0, int(1), int(2))]);
        assert!(validate_commdelay(&two_jobs_delay(5), &s).unwrap().feasible());
    }

    #[test]
    fn cross_machine_needs_delay() {
        let s = Schedule::new(vec![job(0, 0, int(0), int(1)), job(1, 1, int(1), int(2))]);
        let r = validate_commdelay(&two_jobs_delay(5), &s).unwrap();
        assert!(r.has(ViolationKind::Delay, 0, Some(1)));
        let ok = Schedule::new(vec![job(0, 0, int(0), int(1)), job(1, 1, int(6), int(7))]);
        assert!(validate_commdelay(&two_jobs_delay(5), &ok).unwrap().feasible());
    }

    #[test]
    fn bounded_machine_range() {
        let inst = two_jobs_delay(0).with_machines(Machines::Bounded(1)).unwrap();
        let s = Schedule::new(vec![job(0, 0, int(0), int(1)), job(1, 1, int(1), int(2))]);
        assert!(matches!(validate_commdelay(&inst, &s), Err(Error::MachineOutOfRange { .. })));
    }

    #[test]
    fn related_durations() {
        let inst = RelatedInstance::new(vec![3], vec![6], PrecedenceDag::empty(1)).unwrap();
        let ok = Schedule::new(vec![job(0, 0, int(0), int(2))]);
        assert!(validate_related(&inst, &ok).unwrap().feasible());
        let bad = Schedule::new(vec![job(0, 0, int(0), int(1))]);
        assert!(validate_related(&inst, &bad).unwrap().has(ViolationKind::Duration, 0, None));
    }

    #[test]
    fn related_overlap() {
        let inst = RelatedInstance::new(vec![1], vec![1, 1], PrecedenceDag::empty(2)).unwrap();
        let s = Schedule::new(vec![job(0, 0, int(0), int(1)), job(1, 0, frac(1, 2), frac(3, 2))]);
        assert!(validate_related(&inst, &s).unwrap().has(ViolationKind::Overlap, 0, Some(1)));
    }

    #[test]
    fn negative_start_reported() {
        let inst = UmpsInstance::unit(1, vec![0], vec![]).unwrap();
        let s = Schedule::new(vec![job(0, 0, int(-1), int(0))]);
        assert!(validate_umps(&inst, &s).unwrap().has(ViolationKind::NegativeTime, 0, None));
    }
}
