//! Fractional schedules over unit slots and their rounding to integral
//! UMPS schedules of at most twice the horizon.
//!
//! Slots are 0-based: slot `s` is the interval `[s, s + 1)`. The partial
//! load bound `P_{i,t} ≤ γt` is therefore checked as `P(i, s) ≤ γ(s + 1)`.

mod canonical;
mod extract;
mod strip;

pub use canonical::{canonicalize, fill_pass, greedy_canonical, swap_pass, CanonicalOutcome, StepKind, TraceStep};
pub use extract::extract_integral;
pub use strip::{strip_misplaced, StripOutcome};

use crate::error::{Error, Result};
use crate::model::{Schedule, UmpsInstance};
use crate::rational::{self, int, Rational};

/// `γ = 1/(10 n²)`.
pub fn standard_gamma(n: usize) -> Rational {
    Rational::new(1, 10 * (n as i128) * (n as i128))
}

/// Processing mass `x_{l,s}` of every job in every slot of `[0, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSchedule {
    umps: UmpsInstance,
    horizon: usize,
    gamma: Rational,
    mass: Vec<Vec<Rational>>,
}

/// First and last slot with positive mass, per job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowTable {
    pub start: Vec<usize>,
    pub end: Vec<usize>,
}

impl FractionalSchedule {
    /// Builds a fractional schedule and checks Properties 1–3: every job
    /// keeps mass in `[1 − γ, 1]`, every machine-slot load is at most 1,
    /// and a successor has no mass at or before any slot where a
    /// predecessor has mass.
    pub fn new(umps: UmpsInstance, horizon: usize, gamma: Rational, mass: Vec<Vec<Rational>>) -> Result<Self> {
        if mass.len() != umps.n() || mass.iter().any(|row| row.len() != horizon) {
            return Err(Error::InvalidInstance(format!("mass table must be {} x {}", umps.n(), horizon)));
        }
        if !umps.is_unit() {
            return Err(Error::NonUnitLengths((0..umps.n()).find(|&l| umps.length(l) != 1).unwrap_or(0)));
        }
        if gamma < int(0) || gamma >= int(1) {
            return Err(Error::InvalidInstance(format!("gamma {} outside [0, 1)", rational::format(&gamma))));
        }
        let fs = FractionalSchedule { umps, horizon, gamma, mass };
        fs.check_properties()?;
        Ok(fs)
    }

    /// The integral fractional schedule of a unit-length UMPS schedule with
    /// integer starts.
    pub fn from_schedule(umps: &UmpsInstance, sched: &Schedule, gamma: Rational) -> Result<Self> {
        let report = crate::model::validate_umps(umps, sched)?;
        if !report.feasible() {
            return Err(Error::InfeasibleInput(report.to_string()));
        }
        if !sched.is_integral() {
            return Err(Error::InfeasibleInput("schedule has fractional start times".into()));
        }
        let horizon = rational::ceil_i128(&sched.makespan()?) as usize;
        let mut mass = vec![vec![int(0); horizon]; umps.n()];
        for e in sched.entries() {
            mass[e.job][e.start.to_integer() as usize] = int(1);
        }
        FractionalSchedule::new(umps.clone(), horizon, gamma, mass)
    }

    pub fn umps(&self) -> &UmpsInstance {
        &self.umps
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    pub fn mass(&self) -> &[Vec<Rational>] {
        &self.mass
    }

    pub fn x(&self, job: usize, slot: usize) -> Rational {
        self.mass[job][slot]
    }

    pub fn total(&self, job: usize) -> Rational {
        self.mass[job].iter().sum()
    }

    pub fn load(&self, machine: usize, slot: usize) -> Rational {
        self.umps.jobs_on(machine).into_iter().map(|l| self.mass[l][slot]).sum()
    }

    pub fn window(&self, job: usize) -> Option<(usize, usize)> {
        let row = &self.mass[job];
        let first = row.iter().position(|x| *x > int(0))?;
        let last = row.iter().rposition(|x| *x > int(0))?;
        Some((first, last))
    }

    pub fn windows(&self) -> Result<WindowTable> {
        let mut start = Vec::with_capacity(self.umps.n());
        let mut end = Vec::with_capacity(self.umps.n());
        for l in 0..self.umps.n() {
            let (s, e) = self
                .window(l)
                .ok_or_else(|| Error::PropertyViolated(format!("job {} has no mass", l + 1)))?;
            start.push(s);
            end.push(e);
        }
        Ok(WindowTable { start, end })
    }

    pub fn is_integral(&self) -> bool {
        self.mass.iter().flatten().all(|x| *x == int(0) || *x == int(1))
    }

    pub fn check_properties(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::PropertyViolated(msg));
        for (l, row) in self.mass.iter().enumerate() {
            if row.iter().any(|x| *x < int(0) || *x > int(1)) {
                return bad(format!("job {} has mass outside [0, 1]", l + 1));
            }
            let total: Rational = row.iter().sum();
            if total < int(1) - self.gamma || total > int(1) {
                return bad(format!("job {} has total mass {}", l + 1, rational::format(&total)));
            }
        }
        for i in 0..self.umps.m() {
            for s in 0..self.horizon {
                if self.load(i, s) > int(1) {
                    return bad(format!("machine {} overloaded in slot {}", i + 1, s));
                }
            }
        }
        let w = self.windows()?;
        for &(u, v) in self.umps.dag().edges() {
            if w.start[v] <= w.end[u] {
                return bad(format!("job {} runs before predecessor {} finishes", v + 1, u + 1));
            }
        }
        Ok(())
    }

    pub(crate) fn mass_mut(&mut self) -> &mut Vec<Vec<Rational>> {
        &mut self.mass
    }
}

/// `P(i, s)`: mass processed up to and including slot `s` by jobs of
/// machine `i` that still have mass after `s`.
pub fn partial_load(fs: &FractionalSchedule, machine: usize, slot: usize) -> Rational {
    fs.umps()
        .jobs_on(machine)
        .into_iter()
        .filter(|&l| fs.window(l).is_some_and(|(_, e)| e > slot))
        .map(|l| fs.mass()[l][..=slot].iter().sum::<Rational>())
        .sum()
}

/// First `(machine, slot)` with `P(i, s) > γ(s + 1)`, if any.
pub fn partial_load_violation(fs: &FractionalSchedule) -> Option<(usize, usize)> {
    (0..fs.umps().m())
        .flat_map(|i| (0..fs.horizon()).map(move |s| (i, s)))
        .find(|&(i, s)| partial_load(fs, i, s) > fs.gamma() * int(s as i128 + 1))
}
