//! Exact solvers for small instances and list-scheduling baselines.

mod exact;
mod heuristics;
mod partition;
mod search;

use std::time::Duration;

pub use exact::{solve_commdelay_exact, solve_related_exact, solve_umps_exact};
pub use heuristics::{greedy_umps, list_schedule_commdelay, list_schedule_related};
pub use partition::{staircase_holds, staircase_times, verify_no_property};

use crate::model::Schedule;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_jobs: usize,
    /// Search nodes (or subsets, for the partition check) before giving up.
    pub max_states: u64,
    pub time_budget: Option<Duration>,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_jobs: 10, max_states: 50_000_000, time_budget: Some(Duration::from_secs(120)) }
    }
}

impl SolveLimits {
    pub fn with_max_jobs(self, max_jobs: usize) -> Self {
        SolveLimits { max_jobs, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub optimum: Rational,
    pub schedule: Schedule,
    /// False when a budget ran out; `optimum` is then the best makespan found.
    pub proven_optimal: bool,
    pub states_explored: u64,
}
