//! Checks tied to the layered k-partite construction.

use crate::error::{Error, Result};
use crate::model::{KPartiteInstance, Schedule};
use crate::rational::{ceil_i128, int, Rational};
use crate::solvers::SolveLimits;

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Next larger integer with the same number of set bits.
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Whether every pair `S ⊆ V_i`, `T ⊆ V_{i+1}` with `|S| = |T| = ⌈δn⌉` is
/// joined by an edge, for all consecutive layers. Enumerates every `S` and
/// tests whether at least `⌈δn⌉` vertices of the next layer avoid all its
/// neighbours.
pub fn verify_no_property(g: &KPartiteInstance, lim: &SolveLimits) -> Result<bool> {
    let n = g.n();
    if n > 63 {
        return Err(Error::TooLarge(format!("layer size {n}")));
    }
    let d = ceil_i128(&(g.delta() * int(n as i128))) as usize;
    let work = binomial(n as u64, d as u64) * g.k().saturating_sub(1) as u128;
    if work > lim.max_states as u128 {
        return Err(Error::BudgetExceeded(format!("{work} subsets to check")));
    }
    for i in 0..g.k().saturating_sub(1) {
        let mut nbrs = vec![0u64; n];
        for &(a, b) in g.edges(i) {
            nbrs[a] |= 1 << b;
        }
        let full = (1u64 << n) - 1;
        let mut s = (1u64 << d) - 1;
        while s <= full {
            let covered = (0..n).filter(|&a| s >> a & 1 == 1).fold(0u64, |acc, a| acc | nbrs[a]);
            if (n as u32 - covered.count_ones()) as usize >= d {
                return Ok(false);
            }
            s = next_combination(s);
        }
    }
    Ok(true)
}

/// `s_i`: the time machine `i` finishes its `⌈(1−δ)n⌉`-th job.
pub fn staircase_times(g: &KPartiteInstance, sched: &Schedule) -> Vec<Rational> {
    let target = ceil_i128(&((int(1) - g.delta()) * int(g.n() as i128))).max(1) as usize;
    let per_machine = sched.by_machine();
    (0..g.k())
        .map(|i| {
            let mut ends: Vec<Rational> = per_machine.get(&i).map_or(Vec::new(), |l| l.iter().map(|e| e.end).collect());
            ends.sort();
            ends[target - 1]
        })
        .collect()
}

/// `s_{i+1} ≥ s_i + (1−2δ)n` for every consecutive pair of layers. Only
/// meaningful when `δn` is an integer.
pub fn staircase_holds(g: &KPartiteInstance, sched: &Schedule) -> bool {
    let s = staircase_times(g, sched);
    let gap = (int(1) - int(2) * g.delta()) * int(g.n() as i128);
    s.windows(2).all(|w| w[1] >= w[0] + gap)
}
