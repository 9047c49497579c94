//! List-scheduling baselines.

use crate::error::{Error, Result};
use crate::model::{CommDelayInstance, Machines, RelatedInstance, Schedule, ScheduledJob, UmpsInstance};
use crate::rational::{int, Rational};

fn ranks(priority: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut rank = vec![usize::MAX; n];
    if priority.len() != n {
        return Err(Error::InvalidInstance(format!("priority lists {} of {} jobs", priority.len(), n)));
    }
    for (r, &j) in priority.iter().enumerate() {
        if j >= n || rank[j] != usize::MAX {
            return Err(Error::InvalidInstance("priority is not a permutation of the jobs".into()));
        }
        rank[j] = r;
    }
    Ok(rank)
}

/// Whenever a machine is idle, starts its highest-priority job whose
/// predecessors have all finished.
pub fn greedy_umps(inst: &UmpsInstance, priority: &[usize]) -> Result<Schedule> {
    let n = inst.n();
    let rank = ranks(priority, n)?;
    let mut end: Vec<Option<i128>> = vec![None; n];
    let mut avail = vec![0i128; inst.m()];
    let mut entries = Vec::with_capacity(n);
    let mut t = 0i128;
    while entries.len() < n {
        for i in 0..inst.m() {
            if avail[i] > t {
                continue;
            }
            let pick = inst
                .jobs_on(i)
                .into_iter()
                .filter(|&j| end[j].is_none())
                .filter(|&j| inst.dag().preds(j).iter().all(|&u| end[u].is_some_and(|e| e <= t)))
                .min_by_key(|&j| rank[j]);
            if let Some(j) = pick {
                let e = t + inst.length(j) as i128;
                end[j] = Some(e);
                avail[i] = e;
                entries.push(ScheduledJob { job: j, machine: i, start: int(t), end: int(e) });
            }
        }
        t = avail
            .iter()
            .copied()
            .filter(|&a| a > t)
            .min()
            .unwrap_or(t + 1);
    }
    Ok(Schedule::new(entries))
}

/// Graham list scheduling with communication delays on `m` machines. At
/// each epoch, jobs are scanned in priority order and each is started on
/// the lowest-indexed idle machine where its predecessors' results have
/// arrived.
pub fn list_schedule_commdelay(inst: &CommDelayInstance, m: usize, priority: &[usize]) -> Result<Schedule> {
    let n = inst.n_total();
    if m == 0 {
        return Err(Error::InvalidInstance("no machines".into()));
    }
    if let Machines::Bounded(k) = inst.machines() {
        if m > k {
            return Err(Error::InvalidInstance(format!("{m} machines requested, instance allows {k}")));
        }
    }
    let rank = ranks(priority, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| rank[j]);
    let incoming = inst.in_delays();
    let mut placed: Vec<Option<(usize, i128)>> = vec![None; n];
    let mut avail = vec![0i128; m];
    let mut entries = Vec::with_capacity(n);
    let mut t = 0i128;
    while entries.len() < n {
        for &j in &order {
            if placed[j].is_some() || incoming[j].iter().any(|&(u, _)| placed[u].is_none()) {
                continue;
            }
            let arrives = |i: usize| {
                incoming[j].iter().all(|&(u, c)| {
                    let (mu, eu) = placed[u].unwrap();
                    eu + if mu == i { 0 } else { c as i128 } <= t
                })
            };
            if let Some(i) = (0..m).find(|&i| avail[i] <= t && arrives(i)) {
                let e = t + inst.length(j) as i128;
                placed[j] = Some((i, e));
                avail[i] = e;
                entries.push(ScheduledJob { job: j, machine: i, start: int(t), end: int(e) });
            }
        }
        let mut next = avail.iter().copied().filter(|&a| a > t).min();
        for v in 0..n {
            if placed[v].is_some() {
                continue;
            }
            for &(u, c) in &incoming[v] {
                if let Some((_, eu)) = placed[u] {
                    for cand in [eu, eu + c as i128] {
                        if cand > t && next.is_none_or(|x| cand < x) {
                            next = Some(cand);
                        }
                    }
                }
            }
        }
        t = next.unwrap_or(t + 1);
    }
    Ok(Schedule::new(entries))
}

/// Takes jobs in topological order and puts each on the machine where it
/// finishes earliest.
pub fn list_schedule_related(inst: &RelatedInstance) -> Result<Schedule> {
    let order = inst.dag().topological_order()?;
    let mut end: Vec<Rational> = vec![int(0); inst.n()];
    let mut avail = vec![int(0); inst.m()];
    let mut entries = Vec::with_capacity(inst.n());
    for j in order {
        let ready = inst.dag().preds(j).iter().map(|&u| end[u]).max().unwrap_or(int(0));
        let (i, s, e) = (0..inst.m())
            .map(|i| {
                let s = avail[i].max(ready);
                (i, s, s + inst.duration(j, i))
            })
            .min_by_key(|&(i, _, e)| (e, i))
            .expect("at least one machine");
        avail[i] = e;
        end[j] = e;
        entries.push(ScheduledJob { job: j, machine: i, start: s, end: e });
    }
    Ok(Schedule::new(entries))
}
