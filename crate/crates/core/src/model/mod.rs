//! Problem instances, schedules, validators.

pub mod dag;
pub mod instance;
pub mod schedule;
pub mod validate;

pub use dag::PrecedenceDag;
pub use instance::{
    CommDelayInstance, GroupedRelatedInstance, JobGroup, JobShopInstance, KPartiteInstance, MachineGroup, Machines,
    Operation, RelatedInstance, UmpsInstance,
};
pub use schedule::{Schedule, ScheduledJob, ValidationReport, Violation, ViolationKind};
pub use validate::{validate_commdelay, validate_related, validate_umps};

use crate::rational::int;

/// Runs every job back-to-back on its home machine in topological order.
/// The makespan is the total processing time.
pub fn trivial_serial_schedule(inst: &UmpsInstance) -> Schedule {
    let order = inst.dag().topological_order().expect("instance dag is acyclic");
    let mut t = 0i128;
    let entries = order
        .into_iter()
        .map(|l| {
            let start = t;
            t += inst.length(l) as i128;
            ScheduledJob { job: l, machine: inst.home(l), start: int(start), end: int(t) }
        })
        .collect();
    Schedule::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example_umps;

    #[test]
    fn serial_example() {
        let s = trivial_serial_schedule(&example_umps());
        assert_eq!(s.makespan().unwrap(), int(8));
        assert!(validate_umps(&example_umps(), &s).unwrap().feasible());
    }

    #[test]
    fn serial_single_long_job() {
        let inst = UmpsInstance::new(1, vec![7], vec![0], PrecedenceDag::empty(1)).unwrap();
        assert_eq!(trivial_serial_schedule(&inst).makespan().unwrap(), int(7));
    }

    #[test]
    fn serial_ignores_parallelism() {
        let inst = UmpsInstance::unit(3, vec![0, 1, 2], vec![]).unwrap();
        let s = trivial_serial_schedule(&inst);
        assert_eq!(s.makespan().unwrap(), int(3));
        assert!(validate_umps(&inst, &s).unwrap().feasible());
    }
}
