//! Swap and fill passes, and the greedy canonical form they aim at.
//!
//! Machines never share jobs, so every pass runs machine by machine. Within
//! a machine the lexicographically smallest applicable `(slot, l1, l2)` or
//! `(slot, l)` is taken, and the source slot `t'` is the earliest later slot
//! holding mass of the job being pulled forward.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::rounding::FractionalSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Swap,
    Fill,
}

/// One transfer: `mass` of `jobs.0` moves from slot `from` to slot `slot`;
/// for swaps, the same mass of `jobs.1` moves the other way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub machine: usize,
    pub jobs: (usize, Option<usize>),
    pub slot: usize,
    pub from: usize,
    pub mass: Rational,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StepKind::Swap => "swap",
            StepKind::Fill => "fill",
        };
        let jobs = match self.jobs {
            (a, Some(b)) => format!("{},{}", a + 1, b + 1),
            (a, None) => format!("{}", a + 1),
        };
        write!(
            f,
            "{kind} machine={} jobs={jobs} slot={} from={} mass={}",
            self.machine + 1,
            self.slot,
            self.from,
            rational::format(&self.mass)
        )
    }
}

/// Per-machine working state with cached windows.
struct Machine<'a> {
    jobs: Vec<usize>,
    mass: &'a mut [Vec<Rational>],
    start: Vec<usize>,
    end: Vec<usize>,
    horizon: usize,
}

impl<'a> Machine<'a> {
    fn new(jobs: Vec<usize>, mass: &'a mut [Vec<Rational>], horizon: usize) -> Self {
        let mut m = Machine { start: vec![0; mass.len()], end: vec![0; mass.len()], jobs, mass, horizon };
        for k in 0..m.jobs.len() {
            m.refresh(m.jobs[k]);
        }
        m
    }

    fn refresh(&mut self, l: usize) {
        let row = &self.mass[l];
        self.start[l] = row.iter().position(|x| *x > int(0)).unwrap_or(0);
        self.end[l] = row.iter().rposition(|x| *x > int(0)).unwrap_or(0);
    }

    fn load(&self, s: usize) -> Rational {
        self.jobs.iter().map(|&l| self.mass[l][s]).sum()
    }

    fn later_mass(&self, l: usize, s: usize) -> usize {
        (s + 1..self.horizon)
            .find(|&t| self.mass[l][t] > int(0))
            .expect("window end lies after the slot")
    }

    fn swap_step(&mut self, machine: usize) -> Option<TraceStep> {
        for s in 0..self.horizon {
            for &l1 in &self.jobs {
                if !(self.start[l1] <= s && s < self.end[l1]) {
                    continue;
                }
                for &l2 in &self.jobs {
                    if l2 == l1 || (self.end[l1], l1) >= (self.end[l2], l2) || self.mass[l2][s] == int(0) {
                        continue;
                    }
                    let from = self.later_mass(l1, s);
                    let y = self.mass[l1][from].min(self.mass[l2][s]);
                    self.mass[l1][from] -= y;
                    self.mass[l1][s] += y;
                    self.mass[l2][from] += y;
                    self.mass[l2][s] -= y;
                    self.refresh(l1);
                    self.refresh(l2);
                    return Some(TraceStep { kind: StepKind::Swap, machine, jobs: (l1, Some(l2)), slot: s, from, mass: y });
                }
            }
        }
        None
    }

    fn fill_step(&mut self, machine: usize) -> Option<TraceStep> {
        for s in 0..self.horizon {
            let load = self.load(s);
            if load >= int(1) {
                continue;
            }
            for &l in &self.jobs {
                if !(self.start[l] <= s && s < self.end[l]) {
                    continue;
                }
                let from = self.later_mass(l, s);
                let y = self.mass[l][from].min(int(1) - load);
                self.mass[l][from] -= y;
                self.mass[l][s] += y;
                self.refresh(l);
                return Some(TraceStep { kind: StepKind::Fill, machine, jobs: (l, None), slot: s, from, mass: y });
            }
        }
        None
    }
}

fn budget(fs: &FractionalSchedule) -> usize {
    let n = fs.umps().n().max(1);
    let l = fs.horizon().max(1);
    n * n * l * l
}

fn run_pass(fs: &FractionalSchedule, kind: StepKind, trace: &mut Vec<TraceStep>) -> Result<FractionalSchedule> {
    let mut out = fs.clone();
    let limit = budget(fs);
    let horizon = fs.horizon();
    for i in 0..fs.umps().m() {
        let jobs = fs.umps().jobs_on(i);
        let mut m = Machine::new(jobs, out.mass_mut(), horizon);
        let mut steps = 0;
        loop {
            let step = match kind {
                StepKind::Swap => m.swap_step(i),
                StepKind::Fill => m.fill_step(i),
            };
            let Some(step) = step else { break };
            trace.push(step);
            steps += 1;
            if steps > limit {
                return Err(Error::IterationBudgetExceeded(limit));
            }
        }
    }
    Ok(out)
}

/// Applies swap steps until no `(i, l1, l2, t)` satisfies both the
/// earlier-ending-first and the could-run-here conditions.
pub fn swap_pass(fs: &FractionalSchedule) -> Result<FractionalSchedule> {
    run_pass(fs, StepKind::Swap, &mut Vec::new())
}

/// Applies fill steps until no underloaded slot lies strictly inside the
/// window of one of its machine's jobs.
pub fn fill_pass(fs: &FractionalSchedule) -> Result<FractionalSchedule> {
    run_pass(fs, StepKind::Fill, &mut Vec::new())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalOutcome {
    pub schedule: FractionalSchedule,
    pub trace: Vec<TraceStep>,
    /// The step budget tripped and the greedy form of the last reached
    /// state was used instead.
    pub fell_back: bool,
}

/// Alternates swap and fill passes to a joint fixpoint. Each pass is
/// bounded by `n²L²` steps per machine; past that the greedy canonical
/// form is returned.
pub fn canonicalize(fs: &FractionalSchedule) -> Result<CanonicalOutcome> {
    let mut cur = fs.clone();
    let mut trace = Vec::new();
    let rounds = budget(fs);
    for _ in 0..rounds {
        let swapped = match run_pass(&cur, StepKind::Swap, &mut trace) {
            Ok(s) => s,
            Err(Error::IterationBudgetExceeded(_)) => return fallback(&cur, trace),
            Err(e) => return Err(e),
        };
        let before = trace.len();
        let filled = match run_pass(&swapped, StepKind::Fill, &mut trace) {
            Ok(s) => s,
            Err(Error::IterationBudgetExceeded(_)) => return fallback(&swapped, trace),
            Err(e) => return Err(e),
        };
        if trace.len() == before {
            return Ok(CanonicalOutcome { schedule: filled, trace, fell_back: false });
        }
        cur = filled;
    }
    fallback(&cur, trace)
}

fn fallback(fs: &FractionalSchedule, trace: Vec<TraceStep>) -> Result<CanonicalOutcome> {
    Ok(CanonicalOutcome { schedule: greedy_canonical(fs)?, trace, fell_back: true })
}

/// Per machine and slot, sorts the jobs whose window covers the slot by
/// `(window end, index)` and hands each its remaining mass up to the
/// remaining capacity. Windows can only shrink under this operator, so it
/// is iterated until they are stable; the result is its own greedy form.
pub fn greedy_canonical(fs: &FractionalSchedule) -> Result<FractionalSchedule> {
    fs.check_properties()?;
    let mut cur = fs.clone();
    loop {
        let w = cur.windows()?;
        let mut next = vec![vec![int(0); cur.horizon()]; cur.umps().n()];
        for i in 0..cur.umps().m() {
            let jobs = cur.umps().jobs_on(i);
            let mut remaining: Vec<Rational> = (0..cur.umps().n()).map(|l| cur.total(l)).collect();
            for s in 0..cur.horizon() {
                let mut active: Vec<usize> =
                    jobs.iter().copied().filter(|&l| w.start[l] <= s && s <= w.end[l]).collect();
                active.sort_by_key(|&l| (w.end[l], l));
                let mut cap = int(1);
                for l in active {
                    let a = cap.min(remaining[l]);
                    next[l][s] = a;
                    remaining[l] -= a;
                    cap -= a;
                }
            }
            if let Some(&l) = jobs.iter().find(|&&l| remaining[l] != int(0)) {
                return Err(Error::PropertyViolated(format!("job {} does not fit its window greedily", l + 1)));
            }
        }
        let next = FractionalSchedule::new(cur.umps().clone(), cur.horizon(), cur.gamma(), next)?;
        if next.windows()? == w {
            return Ok(next);
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UmpsInstance;
    use crate::rational::frac;

    fn fs1(rows: Vec<Vec<Rational>>) -> FractionalSchedule {
        let n = rows.len();
        let l = rows[0].len();
        let inst = UmpsInstance::unit(1, vec![0; n], vec![]).unwrap();
        FractionalSchedule::new(inst, l, frac(1, 10), rows).unwrap()
    }

    fn rows(fs: &FractionalSchedule) -> Vec<Vec<Rational>> {
        fs.mass().to_vec()
    }

    #[test]
    fn swap_consolidates_earlier_job() {
        let h = frac(1, 2);
        let fs = fs1(vec![vec![h, h], vec![h, h]]);
        let mut trace = Vec::new();
        let out = run_pass(&fs, StepKind::Swap, &mut trace).unwrap();
        assert_eq!(rows(&out), vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].to_string(), "swap machine=1 jobs=1,2 slot=0 from=1 mass=1/2");
        assert_eq!(greedy_canonical(&fs).unwrap(), out);
    }

    #[test]
    fn fixpoint_unchanged() {
        let fs = fs1(vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert_eq!(swap_pass(&fs).unwrap(), fs);
        assert_eq!(fill_pass(&fs).unwrap(), fs);
        assert_eq!(greedy_canonical(&fs).unwrap(), fs);
        let out = canonicalize(&fs).unwrap();
        assert!(out.trace.is_empty() && !out.fell_back);
    }

    #[test]
    fn fill_pulls_mass_forward() {
        let h = frac(1, 2);
        let fs = fs1(vec![vec![h, int(0), h]]);
        let mut trace = Vec::new();
        let out = run_pass(&fs, StepKind::Fill, &mut trace).unwrap();
        assert_eq!(rows(&out), vec![vec![int(1), int(0), int(0)]]);
        assert_eq!(trace[0].to_string(), "fill machine=1 jobs=1 slot=0 from=2 mass=1/2");
    }

    #[test]
    fn passes_preserve_mass_and_capacity() {
        let fs = fs1(vec![
            vec![frac(1, 4), frac(1, 4), frac(1, 2), int(0)],
            vec![frac(1, 2), int(0), frac(1, 4), frac(1, 4)],
            vec![frac(1, 4), frac(1, 2), frac(1, 4), int(0)],
        ]);
        let out = canonicalize(&fs).unwrap().schedule;
        for l in 0..3 {
            assert_eq!(out.total(l), fs.total(l));
        }
        assert!(out.check_properties().is_ok());
        assert_eq!(greedy_canonical(&out).unwrap(), out);
    }

    /// The joint fixpoint is in greedy form for its own windows, but it can
    /// differ from the greedy form computed on the input windows.
    #[test]
    fn fixpoint_differs_from_one_shot_greedy() {
        let fs = fs1(vec![vec![frac(1, 10), frac(4, 5)], vec![frac(7, 10), frac(1, 5)]]);
        let passes = canonicalize(&fs).unwrap().schedule;
        assert_eq!(rows(&passes), vec![vec![frac(9, 10), int(0)], vec![int(0), frac(9, 10)]]);
        let greedy = greedy_canonical(&fs).unwrap();
        assert_eq!(rows(&greedy), vec![vec![frac(9, 10), int(0)], vec![frac(1, 10), frac(4, 5)]]);
        assert_eq!(greedy_canonical(&passes).unwrap(), passes);
    }
}
