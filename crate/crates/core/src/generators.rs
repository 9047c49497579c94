//! Seeded instance families.
//!
//! Every generator draws from ChaCha8 seeded with the caller's `u64` seed
//! and a fixed stream number per family, so equal parameters and seeds give
//! identical instances on every platform. Probabilities are exact rationals
//! and a coin with probability `p/q` succeeds when a uniform draw from
//! `0..q` is below `p`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{JobShopInstance, KPartiteInstance, Operation, PrecedenceDag, Schedule, UmpsInstance};
use crate::rational::{self, int, Rational};
use crate::reductions::KPartiteYesCertificate;
use crate::rounding::FractionalSchedule;

const STREAM_LAYERED: u64 = 1;
const STREAM_RANDOM_UMPS: u64 = 2;
const STREAM_JOBSHOP: u64 = 3;
const STREAM_KPARTITE_YES: u64 = 4;
const STREAM_KPARTITE_DENSE: u64 = 5;
const STREAM_FRACTIONAL: u64 = 6;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

struct Coin {
    num: u64,
    den: u64,
}

impl Coin {
    fn new(p: Rational) -> Result<Coin> {
        if p < int(0) || p > int(1) {
            return Err(Error::InvalidInstance(format!("probability {} outside [0, 1]", rational::format(&p))));
        }
        let num = u64::try_from(*p.numer()).map_err(|_| Error::Overflow("probability".into()))?;
        let den = u64::try_from(*p.denom()).map_err(|_| Error::Overflow("probability".into()))?;
        Ok(Coin { num, den })
    }

    fn flip(&self, rng: &mut ChaCha8Rng) -> bool {
        rng.gen_range(0..self.den) < self.num
    }
}

/// `m` layers of `w` unit jobs; job `(i, a)` has index `i·w + a` and lives
/// on machine `i`; each edge `(i, a) → (i+1, b)` is kept with `edge_prob`.
pub fn gen_layered_umps(m: usize, w: usize, edge_prob: Rational, seed: u64) -> Result<UmpsInstance> {
    if m == 0 || w == 0 {
        return Err(Error::InvalidInstance("layers and width must be positive".into()));
    }
    let coin = Coin::new(edge_prob)?;
    let mut r = rng(seed, STREAM_LAYERED);
    let mut edges = Vec::new();
    for i in 0..m - 1 {
        for a in 0..w {
            for b in 0..w {
                if coin.flip(&mut r) {
                    edges.push((i * w + a, (i + 1) * w + b));
                }
            }
        }
    }
    let home = (0..m * w).map(|j| j / w).collect();
    UmpsInstance::unit(m, home, edges)
}

/// Unit jobs with uniform random homes and edges on index-increasing pairs.
pub fn gen_random_umps(n: usize, m: usize, edge_prob: Rational, seed: u64) -> Result<UmpsInstance> {
    gen_random_umps_with_lengths(n, m, edge_prob, 1, seed)
}

/// As [`gen_random_umps`], with lengths drawn uniformly from `1..=max_len`.
pub fn gen_random_umps_with_lengths(
    n: usize,
    m: usize,
    edge_prob: Rational,
    max_len: u64,
    seed: u64,
) -> Result<UmpsInstance> {
    if m == 0 || max_len == 0 {
        return Err(Error::InvalidInstance("machines and max length must be positive".into()));
    }
    let coin = Coin::new(edge_prob)?;
    let mut r = rng(seed, STREAM_RANDOM_UMPS);
    let home: Vec<usize> = (0..n).map(|_| r.gen_range(0..m)).collect();
    let lengths: Vec<u64> = (0..n).map(|_| if max_len == 1 { 1 } else { r.gen_range(1..=max_len) }).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if coin.flip(&mut r) {
                edges.push((u, v));
            }
        }
    }
    UmpsInstance::new(m, lengths, home, PrecedenceDag::new(n, edges)?)
}

/// Random machine per operation, durations in `1..=4`.
pub fn gen_jobshop(jobs: usize, machines: usize, ops_per_job: usize, seed: u64) -> Result<JobShopInstance> {
    if machines == 0 || ops_per_job == 0 {
        return Err(Error::InvalidInstance("machines and operations per job must be positive".into()));
    }
    let mut r = rng(seed, STREAM_JOBSHOP);
    let chains = (0..jobs)
        .map(|_| {
            (0..ops_per_job)
                .map(|_| Operation { machine: r.gen_range(0..machines), duration: r.gen_range(1..=4) })
                .collect()
        })
        .collect();
    JobShopInstance::new(machines, chains)
}

/// Planted YES instance with `Q = k`, `ε = δ = 1/k`, edge probability 1/2.
pub fn gen_kpartite_yes(n: usize, k: usize, seed: u64) -> Result<(KPartiteInstance, KPartiteYesCertificate)> {
    gen_kpartite_yes_with_prob(n, k, Rational::new(1, 2), seed)
}

/// Each layer is shuffled and cut into `k` cells of `n/k` vertices; only
/// edges from a cell to an equal or later cell of the next layer are drawn.
pub fn gen_kpartite_yes_with_prob(
    n: usize,
    k: usize,
    edge_prob: Rational,
    seed: u64,
) -> Result<(KPartiteInstance, KPartiteYesCertificate)> {
    if k == 0 || n == 0 || !n.is_multiple_of(k) {
        return Err(Error::DivisibilityError { n, q: k });
    }
    let coin = Coin::new(edge_prob)?;
    let mut r = rng(seed, STREAM_KPARTITE_YES);
    let size = n / k;
    let mut cell_of = vec![vec![0usize; n]; k];
    let mut partition = Vec::with_capacity(k);
    for layer in cell_of.iter_mut() {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let cells: Vec<Vec<usize>> = perm
            .chunks(size)
            .map(|c| {
                let mut c = c.to_vec();
                c.sort_unstable();
                c
            })
            .collect();
        for (j, cell) in cells.iter().enumerate() {
            for &a in cell {
                layer[a] = j;
            }
        }
        partition.push(cells);
    }
    let mut edges = vec![Vec::new(); k - 1];
    for (i, set) in edges.iter_mut().enumerate() {
        for a in 0..n {
            for b in 0..n {
                if cell_of[i][a] <= cell_of[i + 1][b] && coin.flip(&mut r) {
                    set.push((a, b));
                }
            }
        }
    }
    Ok((KPartiteInstance::with_standard_params(k, n, edges)?, KPartiteYesCertificate { partition }))
}

/// Every consecutive-layer edge kept independently with `density`.
pub fn gen_kpartite_dense(n: usize, k: usize, density: Rational, seed: u64) -> Result<KPartiteInstance> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidInstance("k and n must be positive".into()));
    }
    let coin = Coin::new(density)?;
    let mut r = rng(seed, STREAM_KPARTITE_DENSE);
    let edges = (0..k - 1)
        .map(|_| {
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|_| coin.flip(&mut r))
                .collect()
        })
        .collect();
    KPartiteInstance::with_standard_params(k, n, edges)
}

/// Perturbs an integral unit-length schedule into a fractional one. In job
/// order, with `split_prob` part of a job's unit moves to a later slot that
/// has spare capacity and precedes all its successors' first slots (jobs
/// with no such slot stay integral). Then each job loses a random share of
/// at most `γ` from its heaviest slot. The amounts are multiples of 1/20
/// and of `γ/10` respectively.
pub fn gen_fractional(
    inst: &UmpsInstance,
    sched: &Schedule,
    gamma: Rational,
    split_prob: Rational,
    seed: u64,
) -> Result<FractionalSchedule> {
    let coin = Coin::new(split_prob)?;
    let base = FractionalSchedule::from_schedule(inst, sched, gamma)?;
    let horizon = base.horizon();
    let mut x: Vec<Vec<Rational>> = base.mass().to_vec();
    let mut r = rng(seed, STREAM_FRACTIONAL);
    let first_slot = |x: &Vec<Vec<Rational>>, l: usize| x[l].iter().position(|v| *v > int(0)).unwrap();
    let load = |x: &Vec<Vec<Rational>>, i: usize, s: usize| -> Rational {
        inst.jobs_on(i).into_iter().map(|l| x[l][s]).sum()
    };
    for l in 0..inst.n() {
        if !coin.flip(&mut r) {
            continue;
        }
        let s = first_slot(&x, l);
        let limit = inst.dag().succs(l).iter().map(|&v| first_slot(&x, v)).min().unwrap_or(horizon);
        let candidates: Vec<usize> =
            (s + 1..limit).filter(|&t| load(&x, inst.home(l), t) < int(1)).collect();
        let Some(&t) = candidates.choose(&mut r) else { continue };
        let room = (int(1) - load(&x, inst.home(l), t)).min(Rational::new(19, 20));
        let steps = (room * int(20)).floor().to_integer().max(1);
        let a = Rational::new(r.gen_range(1..=steps as i64) as i128, 20).min(room);
        x[l][s] -= a;
        x[l][t] += a;
    }
    for row in x.iter_mut() {
        let cut = gamma * Rational::new(r.gen_range(0..=10) as i128, 10);
        let heaviest = (0..horizon).max_by_key(|&t| (row[t], std::cmp::Reverse(t))).unwrap();
        if row[heaviest] > cut {
            row[heaviest] -= cut;
        }
    }
    FractionalSchedule::new(inst.clone(), horizon, gamma, x)
}
