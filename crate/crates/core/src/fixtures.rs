//! The eight-job, three-machine example instance used throughout the docs
//! and tests, and its five-slot schedule.

use crate::model::{Schedule, ScheduledJob, UmpsInstance};
use crate::rational::int;

/// Jobs 1-3 live on machine 1, 4-6 on machine 2, 7-8 on machine 3, with
/// precedences 4→1, 1→5, 6→2, 3→6, 6→7, 7→5, 8→4 (1-based labels).
pub fn example_umps() -> UmpsInstance {
    let home = vec![0, 0, 0, 1, 1, 1, 2, 2];
    let edges = [(4, 1), (1, 5), (6, 2), (3, 6), (6, 7), (7, 5), (8, 4)];
    UmpsInstance::unit(3, home, edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect()).expect("valid fixture")
}

/// A makespan-5 schedule of [`example_umps`].
pub fn example_schedule() -> Schedule {
    // (1-based job, start)
    let placed = [(3, 0), (8, 0), (6, 1), (2, 2), (4, 2), (7, 2), (1, 3), (5, 4)];
    let inst = example_umps();
    Schedule::new(
        placed
            .iter()
            .map(|&(j, s)| ScheduledJob {
                job: j - 1,
                machine: inst.home(j - 1),
                start: int(s),
                end: int(s + 1),
            })
            .collect(),
    )
}
