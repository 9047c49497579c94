use num_integer::Integer;

use crate::error::{Error, Result};
use crate::model::{CommDelayInstance, Machines, RelatedInstance, Schedule, ScheduledJob, UmpsInstance};
use crate::rational::{int, Rational};
use crate::solvers::heuristics::{greedy_umps, list_schedule_commdelay, list_schedule_related};
use crate::solvers::search::{solve, Placement, Problem};
use crate::solvers::{SolveLimits, SolveResult};

fn check_size(n: usize, lim: &SolveLimits) -> Result<()> {
    if n > lim.max_jobs || n > 64 {
        return Err(Error::TooLarge(format!("{n} jobs exceed the exact-solver limit of {}", lim.max_jobs.min(64))));
    }
    Ok(())
}

fn placements(sched: &Schedule, scale: i128) -> Vec<Placement> {
    sched
        .entries()
        .iter()
        .map(|e| Placement {
            machine: e.machine,
            start: (e.start * int(scale)).to_integer() as i64,
            end: (e.end * int(scale)).to_integer() as i64,
        })
        .collect()
}

fn finish(p: &Problem, incumbent: Vec<Placement>, lim: &SolveLimits, scale: i128) -> SolveResult {
    let out = solve(p, incumbent, lim);
    let entries = out
        .placements
        .iter()
        .enumerate()
        .map(|(j, pl)| ScheduledJob {
            job: j,
            machine: pl.machine,
            start: Rational::new(pl.start as i128, scale),
            end: Rational::new(pl.end as i128, scale),
        })
        .collect();
    SolveResult {
        optimum: Rational::new(out.makespan as i128, scale),
        schedule: Schedule::new(entries),
        proven_optimal: out.proven,
        states_explored: out.states,
    }
}

fn preds_with(n: usize, edges: impl Iterator<Item = (usize, usize, i64)>) -> (Vec<Vec<(usize, i64)>>, Vec<Vec<usize>>) {
    let mut preds = vec![Vec::new(); n];
    let mut succs = vec![Vec::new(); n];
    for (u, v, c) in edges {
        preds[v].push((u, c));
        succs[u].push(v);
    }
    (preds, succs)
}

/// Minimum makespan of a UMPS instance.
pub fn solve_umps_exact(inst: &UmpsInstance, lim: &SolveLimits) -> Result<SolveResult> {
    check_size(inst.n(), lim)?;
    let n = inst.n();
    let (preds, succs) = preds_with(n, inst.dag().edges().iter().map(|&(u, v)| (u, v, 0)));
    let p = Problem {
        n,
        machines: inst.m(),
        class: (0..inst.m()).collect(),
        dur: (0..n)
            .map(|j| (0..inst.m()).map(|i| (i == inst.home(j)).then_some(inst.length(j) as i64)).collect())
            .collect(),
        preds,
        succs,
    };
    let incumbent = greedy_umps(inst, &inst.dag().topological_order()?)?;
    Ok(finish(&p, placements(&incumbent, 1), lim, 1))
}

/// Minimum makespan with communication delays. Unbounded machines are
/// modelled as one machine per job; identical machines are opened in index
/// order, so machine assignments are enumerated as set partitions.
pub fn solve_commdelay_exact(inst: &CommDelayInstance, lim: &SolveLimits) -> Result<SolveResult> {
    let n = inst.n_total();
    check_size(n, lim)?;
    let machines = match inst.machines() {
        Machines::Bounded(m) => m.min(n),
        Machines::Unbounded => n,
    };
    let (preds, succs) = preds_with(n, inst.delay_edges().map(|(u, v, c)| (u, v, c as i64)));
    let p = Problem {
        n,
        machines,
        class: vec![0; machines],
        dur: (0..n).map(|j| vec![Some(inst.length(j) as i64); machines]).collect(),
        preds,
        succs,
    };
    let incumbent = list_schedule_commdelay(inst, machines, &inst.dag().topological_order()?)?;
    Ok(finish(&p, placements(&incumbent, 1), lim, 1))
}

/// Minimum makespan on related machines. Times are scaled by the lcm of the
/// speeds so every duration is an integer.
pub fn solve_related_exact(inst: &RelatedInstance, lim: &SolveLimits) -> Result<SolveResult> {
    let n = inst.n();
    check_size(n, lim)?;
    let scale = inst.speeds().iter().fold(1i128, |acc, &s| acc.lcm(&(s as i128)));
    let dur = (0..n)
        .map(|j| {
            (0..inst.m())
                .map(|i| {
                    let d = inst.lengths()[j] as i128 * (scale / inst.speeds()[i] as i128);
                    i64::try_from(d).map(Some).map_err(|_| Error::Overflow("scaled duration".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let class = (0..inst.m())
        .map(|i| (0..=i).find(|&k| inst.speeds()[k] == inst.speeds()[i]).unwrap())
        .collect();
    let (preds, succs) = preds_with(n, inst.dag().edges().iter().map(|&(u, v)| (u, v, 0)));
    let p = Problem { n, machines: inst.m(), class, dur, preds, succs };
    let incumbent = list_schedule_related(inst)?;
    Ok(finish(&p, placements(&incumbent, scale), lim, scale))
}
