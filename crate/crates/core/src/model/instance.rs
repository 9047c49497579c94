use crate::error::{Error, Result};
use crate::model::dag::PrecedenceDag;
use crate::rational::Rational;

/// Unique-machine precedence scheduling: every job runs on exactly one
/// prescribed machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UmpsInstance {
    m: usize,
    lengths: Vec<u64>,
    home: Vec<usize>,
    dag: PrecedenceDag,
}

impl UmpsInstance {
    pub fn new(m: usize, lengths: Vec<u64>, home: Vec<usize>, dag: PrecedenceDag) -> Result<Self> {
        let n = lengths.len();
        if m == 0 {
            return Err(Error::InvalidInstance("machine count must be positive".into()));
        }
        if home.len() != n || dag.node_count() != n {
            return Err(Error::InvalidInstance(format!(
                "{} lengths, {} homes and a dag over {} nodes",
                n,
                home.len(),
                dag.node_count()
            )));
        }
        if let Some(l) = lengths.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInstance(format!("job {l} has zero length")));
        }
        if let Some(l) = home.iter().position(|&h| h >= m) {
            return Err(Error::MachineOutOfRange { job: l, machine: home[l] });
        }
        Ok(UmpsInstance { m, lengths, home, dag })
    }

    /// Unit-length jobs.
    pub fn unit(m: usize, home: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = home.len();
        UmpsInstance::new(m, vec![1; n], home, PrecedenceDag::new(n, edges)?)
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn length(&self, l: usize) -> u64 {
        self.lengths[l]
    }

    pub fn home(&self, l: usize) -> usize {
        self.home[l]
    }

    pub fn homes(&self) -> &[usize] {
        &self.home
    }

    pub fn dag(&self) -> &PrecedenceDag {
        &self.dag
    }

    /// `J(i)`: the jobs whose home is machine `i`, ascending.
    pub fn jobs_on(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&l| self.home[l] == i).collect()
    }

    pub fn total_length(&self) -> u64 {
        self.lengths.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.lengths.iter().all(|&p| p == 1)
    }

    /// Every precedence goes from a machine-`i` job to a machine-`(i+1)` job.
    pub fn is_layered(&self) -> bool {
        self.dag
            .edges()
            .iter()
            .all(|&(u, v)| self.home[v] == self.home[u] + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Operation {
    pub machine: usize,
    pub duration: u64,
}

/// Job shop: each job is a chain of operations with fixed machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobShopInstance {
    machines: usize,
    jobs: Vec<Vec<Operation>>,
}

impl JobShopInstance {
    pub fn new(machines: usize, jobs: Vec<Vec<Operation>>) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidInstance("machine count must be positive".into()));
        }
        for (j, chain) in jobs.iter().enumerate() {
            if chain.is_empty() {
                return Err(Error::InvalidInstance(format!("job {j} has no operations")));
            }
            for op in chain {
                if op.machine >= machines {
                    return Err(Error::MachineOutOfRange { job: j, machine: op.machine });
                }
                if op.duration == 0 {
                    return Err(Error::InvalidInstance(format!("job {j} has a zero-length operation")));
                }
            }
        }
        Ok(JobShopInstance { machines, jobs })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[Vec<Operation>] {
        &self.jobs
    }

    pub fn operation_count(&self) -> usize {
        self.jobs.iter().map(Vec::len).sum()
    }

    /// All jobs visit machines in one common order (each at most once).
    pub fn is_flow_shop(&self) -> bool {
        let route = |c: &Vec<Operation>| c.iter().map(|o| o.machine).collect::<Vec<_>>();
        let Some(first) = self.jobs.first().map(route) else {
            return true;
        };
        let mut sorted = first.clone();
        sorted.dedup();
        sorted.len() == first.len() && self.jobs.iter().all(|c| route(c) == first)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Machines {
    Bounded(usize),
    Unbounded,
}

/// Non-uniform communication delays: a delay `c_uv` applies to an edge only
/// when its endpoints run on different machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommDelayInstance {
    lengths: Vec<u64>,
    /// Aligned with `dag.edges()`.
    delays: Vec<u64>,
    dag: PrecedenceDag,
    machines: Machines,
}

impl CommDelayInstance {
    pub fn new(lengths: Vec<u64>, dag: PrecedenceDag, delays: Vec<u64>, machines: Machines) -> Result<Self> {
        if dag.node_count() != lengths.len() {
            return Err(Error::InvalidInstance("dag size differs from job count".into()));
        }
        if delays.len() != dag.edges().len() {
            return Err(Error::InvalidInstance(format!(
                "{} delays for {} edges",
                delays.len(),
                dag.edges().len()
            )));
        }
        if let Some(l) = lengths.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInstance(format!("job {l} has zero length")));
        }
        if machines == Machines::Bounded(0) {
            return Err(Error::InvalidInstance("machine count must be positive".into()));
        }
        Ok(CommDelayInstance { lengths, delays, dag, machines })
    }

    /// Every edge carries the same delay `c`.
    pub fn uniform(lengths: Vec<u64>, dag: PrecedenceDag, c: u64, machines: Machines) -> Result<Self> {
        let delays = vec![c; dag.edges().len()];
        CommDelayInstance::new(lengths, dag, delays, machines)
    }

    pub fn n_total(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn length(&self, j: usize) -> u64 {
        self.lengths[j]
    }

    pub fn delays(&self) -> &[u64] {
        &self.delays
    }

    pub fn dag(&self) -> &PrecedenceDag {
        &self.dag
    }

    pub fn machines(&self) -> Machines {
        self.machines
    }

    pub fn with_machines(&self, machines: Machines) -> Result<Self> {
        CommDelayInstance::new(self.lengths.clone(), self.dag.clone(), self.delays.clone(), machines)
    }

    /// `(u, v, c_uv)` triples.
    pub fn delay_edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.dag.edges().iter().zip(&self.delays).map(|(&(u, v), &c)| (u, v, c))
    }

    /// Incoming edges of `v` as `(u, c_uv)`.
    pub fn in_delays(&self) -> Vec<Vec<(usize, u64)>> {
        let mut incoming = vec![Vec::new(); self.n_total()];
        for (u, v, c) in self.delay_edges() {
            incoming[v].push((u, c));
        }
        incoming
    }
}

/// Related machines: job `j` takes `p_j / s_i` time on machine `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatedInstance {
    speeds: Vec<u64>,
    lengths: Vec<u64>,
    dag: PrecedenceDag,
}

impl RelatedInstance {
    pub fn new(speeds: Vec<u64>, lengths: Vec<u64>, dag: PrecedenceDag) -> Result<Self> {
        if speeds.is_empty() {
            return Err(Error::InvalidInstance("no machines".into()));
        }
        if speeds.contains(&0) || lengths.contains(&0) {
            return Err(Error::InvalidInstance("speeds and lengths must be positive".into()));
        }
        if dag.node_count() != lengths.len() {
            return Err(Error::InvalidInstance("dag size differs from job count".into()));
        }
        Ok(RelatedInstance { speeds, lengths, dag })
    }

    pub fn speeds(&self) -> &[u64] {
        &self.speeds
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn dag(&self) -> &PrecedenceDag {
        &self.dag
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    pub fn m(&self) -> usize {
        self.speeds.len()
    }

    pub fn duration(&self, job: usize, machine: usize) -> Rational {
        Rational::new(self.lengths[job] as i128, self.speeds[machine] as i128)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JobGroup {
    pub multiplicity: u128,
    pub length: u128,
    pub origin_job: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineGroup {
    pub multiplicity: u128,
    pub speed: u128,
}

/// Related-machines instance in grouped form: identical jobs and identical
/// machines are stored once with a multiplicity. A group edge `u → v` means
/// every member of `u` precedes every member of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedRelatedInstance {
    job_groups: Vec<JobGroup>,
    machine_groups: Vec<MachineGroup>,
    group_dag: PrecedenceDag,
}

impl GroupedRelatedInstance {
    pub fn new(job_groups: Vec<JobGroup>, machine_groups: Vec<MachineGroup>, group_dag: PrecedenceDag) -> Result<Self> {
        if job_groups.iter().any(|g| g.multiplicity == 0 || g.length == 0) {
            return Err(Error::InvalidInstance("job groups need positive multiplicity and length".into()));
        }
        if machine_groups.is_empty() || machine_groups.iter().any(|g| g.multiplicity == 0 || g.speed == 0) {
            return Err(Error::InvalidInstance("machine groups need positive multiplicity and speed".into()));
        }
        if group_dag.node_count() != job_groups.len() {
            return Err(Error::InvalidInstance("group dag size differs from group count".into()));
        }
        Ok(GroupedRelatedInstance { job_groups, machine_groups, group_dag })
    }

    pub fn job_groups(&self) -> &[JobGroup] {
        &self.job_groups
    }

    pub fn machine_groups(&self) -> &[MachineGroup] {
        &self.machine_groups
    }

    pub fn group_dag(&self) -> &PrecedenceDag {
        &self.group_dag
    }

    /// Duration of one member of job group `g` on one machine of machine group `h`.
    pub fn duration(&self, g: usize, h: usize) -> Result<Rational> {
        let len = i128::try_from(self.job_groups[g].length).map_err(|_| Error::Overflow("job length".into()))?;
        let speed = i128::try_from(self.machine_groups[h].speed).map_err(|_| Error::Overflow("speed".into()))?;
        Ok(Rational::new(len, speed))
    }

    pub fn total_jobs(&self) -> Option<u128> {
        self.job_groups.iter().try_fold(0u128, |acc, g| acc.checked_add(g.multiplicity))
    }

    pub fn total_machines(&self) -> Option<u128> {
        self.machine_groups.iter().try_fold(0u128, |acc, g| acc.checked_add(g.multiplicity))
    }
}

/// A `k`-layer graph with `n` vertices per layer and edges only between
/// consecutive layers. `edges[i]` holds pairs `(a, b)` with `a ∈ V_i`,
/// `b ∈ V_{i+1}`, both as in-layer indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPartiteInstance {
    k: usize,
    n: usize,
    edges: Vec<Vec<(usize, usize)>>,
    q: usize,
    eps: Rational,
    delta: Rational,
}

impl KPartiteInstance {
    pub fn new(
        k: usize,
        n: usize,
        edges: Vec<Vec<(usize, usize)>>,
        q: usize,
        eps: Rational,
        delta: Rational,
    ) -> Result<Self> {
        if k == 0 || n == 0 || q == 0 {
            return Err(Error::InvalidInstance("k, n and Q must be positive".into()));
        }
        if edges.len() != k - 1 {
            return Err(Error::InvalidInstance(format!("expected {} edge sets, got {}", k - 1, edges.len())));
        }
        let open_unit = |r: &Rational| *r > Rational::from_integer(0) && *r < Rational::from_integer(1);
        // k = 1 yields ε = δ = 1 under the Q = k convention, which is allowed.
        let closed_unit = |r: &Rational| *r > Rational::from_integer(0) && *r <= Rational::from_integer(1);
        let ok = if k == 1 { closed_unit(&eps) && closed_unit(&delta) } else { open_unit(&eps) && open_unit(&delta) };
        if !ok {
            return Err(Error::InvalidInstance("eps and delta must lie in (0, 1)".into()));
        }
        let mut edges = edges;
        for set in edges.iter_mut() {
            if set.iter().any(|&(a, b)| a >= n || b >= n) {
                return Err(Error::InvalidInstance("edge endpoint outside its layer".into()));
            }
            set.sort_unstable();
            let before = set.len();
            set.dedup();
            if set.len() != before {
                return Err(Error::InvalidInstance("duplicate k-partite edge".into()));
            }
        }
        Ok(KPartiteInstance { k, n, edges, q, eps, delta })
    }

    /// The standard parameter choice `Q = k`, `ε = δ = 1/k`.
    pub fn with_standard_params(k: usize, n: usize, edges: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let r = Rational::new(1, k as i128);
        KPartiteInstance::new(k, n, edges, k, r, r)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn eps(&self) -> Rational {
        self.eps
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    /// Edges between layer `i` and layer `i + 1`.
    pub fn edges(&self, i: usize) -> &[(usize, usize)] {
        &self.edges[i]
    }

    pub fn edge_sets(&self) -> &[Vec<(usize, usize)>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Global job index of vertex `a` of layer `i` after the UMPS embedding.
    pub fn vertex_id(&self, layer: usize, a: usize) -> usize {
        layer * self.n + a
    }
}
