//! Independent reference solvers: exhaustive search over integer start-time
//! vectors, jobs fixed in topological order. Only for tiny instances.

#![allow(dead_code)]

use sched_reduce::model::{CommDelayInstance, Machines, RelatedInstance, Schedule, ScheduledJob, UmpsInstance};
use sched_reduce::rational::{int, Rational};

struct TimeIndexed {
    order: Vec<usize>,
    /// `dur[j][i]`, `None` if job `j` may not run on machine `i`.
    dur: Vec<Vec<Option<i64>>>,
    preds: Vec<Vec<(usize, i64)>>,
    /// Machines are interchangeable: a job may open at most one new machine.
    symmetric: bool,
    machines: usize,
    start: Vec<i64>,
    end: Vec<i64>,
    machine: Vec<usize>,
    best: i64,
    best_assign: Vec<(usize, i64, i64)>,
}

impl TimeIndexed {
    fn go(&mut self, k: usize, used: usize, makespan: i64) {
        if makespan >= self.best {
            return;
        }
        if k == self.order.len() {
            self.best = makespan;
            self.best_assign = (0..self.start.len()).map(|j| (self.machine[j], self.start[j], self.end[j])).collect();
            return;
        }
        let j = self.order[k];
        let open = if self.symmetric { (used + 1).min(self.machines) } else { self.machines };
        for i in 0..open {
            let Some(d) = self.dur[j][i] else { continue };
            for s in 0..self.best - d {
                let ok_preds = self.preds[j].iter().all(|&(u, c)| {
                    let lag = if self.machine[u] == i { 0 } else { c };
                    self.end[u] + lag <= s
                });
                if !ok_preds {
                    continue;
                }
                let clash = self.order[..k]
                    .iter()
                    .any(|&u| self.machine[u] == i && self.start[u] < s + d && s < self.end[u]);
                if clash {
                    continue;
                }
                self.start[j] = s;
                self.end[j] = s + d;
                self.machine[j] = i;
                self.go(k + 1, used.max(i + 1), makespan.max(s + d));
                self.machine[j] = usize::MAX;
            }
        }
    }
}

fn run(
    order: Vec<usize>,
    dur: Vec<Vec<Option<i64>>>,
    preds: Vec<Vec<(usize, i64)>>,
    machines: usize,
    symmetric: bool,
    horizon: i64,
) -> (i64, Vec<(usize, i64, i64)>) {
    let n = dur.len();
    let mut t = TimeIndexed {
        order,
        dur,
        preds,
        symmetric,
        machines,
        start: vec![0; n],
        end: vec![0; n],
        machine: vec![usize::MAX; n],
        best: horizon + 1,
        best_assign: Vec::new(),
    };
    t.go(0, 0, 0);
    (t.best, t.best_assign)
}

fn to_schedule(assign: &[(usize, i64, i64)], scale: i128) -> Schedule {
    Schedule::new(
        assign
            .iter()
            .enumerate()
            .map(|(j, &(m, s, e))| ScheduledJob {
                job: j,
                machine: m,
                start: Rational::new(s as i128, scale),
                end: Rational::new(e as i128, scale),
            })
            .collect(),
    )
}

/// Optimal UMPS makespan with horizon `Σp`.
pub fn umps_oracle(inst: &UmpsInstance) -> (Rational, Schedule) {
    let n = inst.n();
    let dur = (0..n)
        .map(|j| (0..inst.m()).map(|i| (i == inst.home(j)).then_some(inst.length(j) as i64)).collect())
        .collect();
    let mut preds = vec![Vec::new(); n];
    for &(u, v) in inst.dag().edges() {
        preds[v].push((u, 0));
    }
    let horizon = inst.total_length() as i64;
    let (best, assign) = run(inst.dag().topological_order().unwrap(), dur, preds, inst.m(), false, horizon);
    (int(best as i128), to_schedule(&assign, 1))
}

/// Optimal makespan with communication delays; a single machine running
/// everything serially bounds the horizon by `Σp`.
pub fn commdelay_oracle(inst: &CommDelayInstance) -> (Rational, Schedule) {
    let n = inst.n_total();
    let machines = match inst.machines() {
        Machines::Bounded(m) => m,
        Machines::Unbounded => n,
    };
    let dur = (0..n).map(|j| vec![Some(inst.length(j) as i64); machines]).collect();
    let preds = inst
        .in_delays()
        .into_iter()
        .map(|ps| ps.into_iter().map(|(u, c)| (u, c as i64)).collect())
        .collect();
    let horizon: i64 = inst.lengths().iter().map(|&p| p as i64).sum();
    let (best, assign) = run(inst.dag().topological_order().unwrap(), dur, preds, machines, true, horizon);
    (int(best as i128), to_schedule(&assign, 1))
}

/// Optimal related-machines makespan, time scaled by the lcm of the speeds.
pub fn related_oracle(inst: &RelatedInstance) -> Rational {
    let n = inst.n();
    let lcm = inst.speeds().iter().fold(1i64, |a, &s| {
        let s = s as i64;
        let mut g = (a, s);
        while g.1 != 0 {
            g = (g.1, g.0 % g.1);
        }
        a / g.0 * s
    });
    let dur: Vec<Vec<Option<i64>>> = (0..n)
        .map(|j| (0..inst.m()).map(|i| Some(inst.lengths()[j] as i64 * lcm / inst.speeds()[i] as i64)).collect())
        .collect();
    let mut preds = vec![Vec::new(); n];
    for &(u, v) in inst.dag().edges() {
        preds[v].push((u, 0));
    }
    let fastest = (0..inst.m()).max_by_key(|&i| inst.speeds()[i]).unwrap();
    let horizon: i64 = (0..n).map(|j| dur[j][fastest].unwrap()).sum();
    let (best, _) = run(inst.dag().topological_order().unwrap(), dur, preds, inst.m(), false, horizon);
    Rational::new(best as i128, lcm as i128)
}
