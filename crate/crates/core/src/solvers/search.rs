//! Depth-first branch and bound over semi-active schedules.
//!
//! A schedule is semi-active when every job starts as early as its machine
//! predecessor and its DAG predecessors (plus delays across machines)
//! allow. Listing the jobs of such a schedule by `(start, index)` and
//! appending each to the end of its machine reproduces it, so the search
//! builds schedules job by job and only accepts a placement whose
//! `(start, index)` is strictly greater than the previous one. Each
//! semi-active schedule is generated exactly once, and some optimal schedule
//! is semi-active.
//!
//! Machines of the same class are interchangeable; a machine may be opened
//! only if every lower-indexed machine of its class is already in use.

use std::collections::HashMap;
use std::time::Instant;

use crate::solvers::SolveLimits;

const MEMO_CAP: usize = 4_000_000;

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub n: usize,
    pub machines: usize,
    /// Interchangeability class of each machine, `< machines`.
    pub class: Vec<usize>,
    /// `dur[j][i]`: integer duration of job `j` on machine `i`, if allowed.
    pub dur: Vec<Vec<Option<i64>>>,
    /// `(predecessor, delay when on a different machine)`.
    pub preds: Vec<Vec<(usize, i64)>>,
    pub succs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Placement {
    pub machine: usize,
    pub start: i64,
    pub end: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub makespan: i64,
    pub placements: Vec<Placement>,
    pub proven: bool,
    pub states: u64,
}

struct Search<'a> {
    p: &'a Problem,
    tail: Vec<i64>,
    max_delay_out: Vec<i64>,
    placed: u64,
    unplaced_preds: Vec<usize>,
    machine_of: Vec<usize>,
    end: Vec<i64>,
    start: Vec<i64>,
    avail: Vec<i64>,
    used: Vec<bool>,
    s_last: i64,
    j_last: Option<usize>,
    cur: i64,
    best: i64,
    best_placements: Vec<Placement>,
    memo: HashMap<Vec<i64>, i64>,
    states: u64,
    max_states: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

fn min_dur(p: &Problem, j: usize) -> i64 {
    p.dur[j].iter().flatten().copied().min().expect("job runs somewhere")
}

/// Longest chain of minimum durations starting at each job, delays ignored.
fn tails(p: &Problem) -> Vec<i64> {
    let mut indeg: Vec<usize> = p.preds.iter().map(Vec::len).collect();
    let mut order = Vec::with_capacity(p.n);
    let mut stack: Vec<usize> = (0..p.n).filter(|&j| indeg[j] == 0).collect();
    while let Some(j) = stack.pop() {
        order.push(j);
        for &v in &p.succs[j] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    let mut tail = vec![0; p.n];
    for &j in order.iter().rev() {
        let after = p.succs[j].iter().map(|&v| tail[v]).max().unwrap_or(0);
        tail[j] = min_dur(p, j) + after;
    }
    tail
}

impl<'a> Search<'a> {
    fn blocked_by_symmetry(&self, i: usize) -> bool {
        !self.used[i] && (0..i).any(|k| !self.used[k] && self.p.class[k] == self.p.class[i])
    }

    /// Earliest start on machine `i` allowed by the already placed
    /// predecessors of `j`.
    fn ready_time(&self, j: usize, i: usize) -> i64 {
        self.p.preds[j]
            .iter()
            .filter(|&&(u, _)| self.placed >> u & 1 == 1)
            .map(|&(u, c)| self.end[u] + if self.machine_of[u] == i { 0 } else { c })
            .max()
            .unwrap_or(0)
    }

    fn lower_bound(&self) -> i64 {
        let mut lb = self.cur;
        let mut per_machine_start = vec![i64::MAX; self.p.machines];
        let mut per_machine_work = vec![0i64; self.p.machines];
        for j in 0..self.p.n {
            if self.placed >> j & 1 == 1 {
                continue;
            }
            let mut est = i64::MAX;
            let mut seen_unused = vec![false; self.p.machines];
            let mut only: Option<usize> = None;
            let mut allowed = 0;
            for i in 0..self.p.machines {
                if self.p.dur[j][i].is_none() {
                    continue;
                }
                allowed += 1;
                only = Some(i);
                if !self.used[i] {
                    let c = self.p.class[i];
                    if seen_unused[c] {
                        continue;
                    }
                    seen_unused[c] = true;
                }
                let t = self.avail[i].max(self.s_last).max(self.ready_time(j, i));
                est = est.min(t);
            }
            lb = lb.max(est + self.tail[j]);
            if allowed == 1 {
                let i = only.unwrap();
                per_machine_start[i] = per_machine_start[i].min(est);
                per_machine_work[i] += self.p.dur[j][i].unwrap();
            }
        }
        for i in 0..self.p.machines {
            if per_machine_work[i] > 0 {
                lb = lb.max(per_machine_start[i].max(self.avail[i]) + per_machine_work[i]);
            }
        }
        lb
    }

    fn key(&self) -> Vec<i64> {
        let below = self.s_last - 1;
        let mut key = Vec::with_capacity(3 + self.p.machines + self.p.n);
        key.push(self.placed as i64);
        key.push(self.s_last);
        key.push(self.j_last.map_or(-1, |j| j as i64));
        for i in 0..self.p.machines {
            key.push(if self.used[i] { self.avail[i].max(below) } else { i64::MIN });
        }
        for u in 0..self.p.n {
            if self.placed >> u & 1 == 0 || self.p.succs[u].iter().all(|&v| self.placed >> v & 1 == 1) {
                continue;
            }
            if self.end[u] + self.max_delay_out[u] < self.s_last {
                key.push(i64::MIN);
            } else {
                key.push(self.machine_of[u] as i64);
                key.push(self.end[u]);
            }
        }
        key
    }

    fn dfs(&mut self) {
        if self.aborted {
            return;
        }
        self.states += 1;
        if self.states > self.max_states {
            self.aborted = true;
            return;
        }
        if self.states.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.aborted = true;
            return;
        }
        let all = if self.p.n == 64 { u64::MAX } else { (1u64 << self.p.n) - 1 };
        if self.placed == all {
            if self.cur < self.best {
                self.best = self.cur;
                self.best_placements = (0..self.p.n)
                    .map(|j| Placement { machine: self.machine_of[j], start: self.start[j], end: self.end[j] })
                    .collect();
            }
            return;
        }
        if self.lower_bound() >= self.best {
            return;
        }
        let key = self.key();
        match self.memo.get(&key) {
            Some(&seen) if seen <= self.cur => return,
            _ => {
                if self.memo.len() < MEMO_CAP || self.memo.contains_key(&key) {
                    self.memo.insert(key, self.cur);
                }
            }
        }

        let mut moves = Vec::new();
        for j in 0..self.p.n {
            if self.placed >> j & 1 == 1 || self.unplaced_preds[j] > 0 {
                continue;
            }
            for i in 0..self.p.machines {
                let Some(d) = self.p.dur[j][i] else { continue };
                if self.blocked_by_symmetry(i) {
                    continue;
                }
                let s = self.avail[i].max(self.ready_time(j, i));
                if self.j_last.is_some_and(|jl| (s, j) <= (self.s_last, jl)) {
                    continue;
                }
                moves.push((s, s + d, j, i));
            }
        }
        moves.sort_unstable();
        for (s, e, j, i) in moves {
            if s + self.tail[j] - min_dur(self.p, j) + (e - s) >= self.best {
                continue;
            }
            let saved = (self.avail[i], self.used[i], self.s_last, self.j_last, self.cur);
            self.placed |= 1 << j;
            self.machine_of[j] = i;
            self.start[j] = s;
            self.end[j] = e;
            self.avail[i] = e;
            self.used[i] = true;
            self.s_last = s;
            self.j_last = Some(j);
            self.cur = self.cur.max(e);
            for &v in &self.p.succs[j] {
                self.unplaced_preds[v] -= 1;
            }
            self.dfs();
            for &v in &self.p.succs[j] {
                self.unplaced_preds[v] += 1;
            }
            self.placed &= !(1 << j);
            (self.avail[i], self.used[i], self.s_last, self.j_last, self.cur) = saved;
            if self.aborted {
                return;
            }
        }
    }
}

/// Minimises makespan. `incumbent` is a feasible solution used as the
/// initial upper bound; it is returned unchanged when nothing better exists.
pub(crate) fn solve(p: &Problem, incumbent: Vec<Placement>, lim: &SolveLimits) -> Outcome {
    assert!(p.n <= 64, "search supports at most 64 jobs");
    let best = incumbent.iter().map(|pl| pl.end).max().unwrap_or(0);
    let max_delay_out = (0..p.n)
        .map(|u| {
            p.succs[u]
                .iter()
                .flat_map(|&v| p.preds[v].iter().filter(move |&&(w, _)| w == u).map(|&(_, c)| c))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = Search {
        p,
        tail: tails(p),
        max_delay_out,
        placed: 0,
        unplaced_preds: p.preds.iter().map(Vec::len).collect(),
        machine_of: vec![usize::MAX; p.n],
        end: vec![0; p.n],
        start: vec![0; p.n],
        avail: vec![0; p.machines],
        used: vec![false; p.machines],
        s_last: 0,
        j_last: None,
        cur: 0,
        best,
        best_placements: incumbent,
        memo: HashMap::new(),
        states: 0,
        max_states: lim.max_states,
        deadline: lim.time_budget.map(|d| Instant::now() + d),
        aborted: false,
    };
    if p.n > 0 {
        s.dfs();
    }
    Outcome { makespan: s.best, placements: s.best_placements, proven: !s.aborted, states: s.states }
}
