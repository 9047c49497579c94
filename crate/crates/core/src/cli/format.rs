//! JSON file formats. Every document carries a top-level `"kind"`; job,
//! machine and vertex indices are 1-based on disk, rationals are `"p/q"`
//! strings and group multiplicities are decimal strings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CommDelayInstance, GroupedRelatedInstance, JobGroup, JobShopInstance, KPartiteInstance, MachineGroup, Machines,
    Operation, PrecedenceDag, RelatedInstance, Schedule, ScheduledJob, UmpsInstance,
};
use crate::rational::{self, Rational};
use crate::reductions::{
    CommDelayReductionArtifact, GroupPlacement, GroupedSchedule, KPartiteYesCertificate, RelatedReductionArtifact,
};
use crate::rounding::FractionalSchedule;
use crate::solvers::SolveResult;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Umps(UmpsDoc),
    Jobshop(JobShopDoc),
    Commdelay(CommDelayDoc),
    RelatedGrouped(GroupedRelatedDoc),
    Related(RelatedDoc),
    Kpartite(KPartiteDoc),
    Schedule(ScheduleDoc),
    Fractional(FractionalDoc),
    GroupedSchedule(GroupedScheduleDoc),
    SolveResult(SolveResultDoc),
    CommdelayArtifact(CommDelayArtifactDoc),
    RelatedArtifact(RelatedArtifactDoc),
    JobshopArtifact(JobShopArtifactDoc),
    KpartiteArtifact(KPartiteArtifactDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Umps(_) => "umps",
            Document::Jobshop(_) => "jobshop",
            Document::Commdelay(_) => "commdelay",
            Document::RelatedGrouped(_) => "related_grouped",
            Document::Related(_) => "related",
            Document::Kpartite(_) => "kpartite",
            Document::Schedule(_) => "schedule",
            Document::Fractional(_) => "fractional",
            Document::GroupedSchedule(_) => "grouped_schedule",
            Document::SolveResult(_) => "solve_result",
            Document::CommdelayArtifact(_) => "commdelay_artifact",
            Document::RelatedArtifact(_) => "related_artifact",
            Document::JobshopArtifact(_) => "jobshop_artifact",
            Document::KpartiteArtifact(_) => "kpartite_artifact",
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Document> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Document::parse(&text)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    fn wrong(&self, expected: &str) -> Error {
        Error::WrongKind { expected: expected.into(), found: self.kind().into() }
    }

    pub fn into_umps(self) -> Result<UmpsInstance> {
        match self {
            Document::Umps(d) => d.to_model(),
            other => Err(other.wrong("umps")),
        }
    }

    pub fn into_kpartite(self) -> Result<(KPartiteInstance, Option<KPartiteYesCertificate>)> {
        match self {
            Document::Kpartite(d) => d.to_model(),
            other => Err(other.wrong("kpartite")),
        }
    }

    /// A plain schedule, or the schedule inside a solve result.
    pub fn into_schedule(self) -> Result<Schedule> {
        match self {
            Document::Schedule(d) => d.to_model(),
            Document::SolveResult(d) => d.schedule.to_model(),
            other => Err(other.wrong("schedule")),
        }
    }
}

fn one_based(x: usize) -> usize {
    x + 1
}

fn zero_based(x: usize, what: &str) -> Result<usize> {
    x.checked_sub(1).ok_or_else(|| Error::Format(format!("{what} index 0; indices are 1-based")))
}

fn rat(s: &str) -> Result<Rational> {
    rational::parse(s)
}

fn big(s: &str) -> Result<u128> {
    s.parse().map_err(|_| Error::Format(format!("expected a decimal integer, found {s:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagDoc {
    pub node_count: usize,
    pub edges: Vec<[usize; 2]>,
}

impl DagDoc {
    pub fn from_model(d: &PrecedenceDag) -> Self {
        DagDoc { node_count: d.node_count(), edges: d.edges().iter().map(|&(u, v)| [one_based(u), one_based(v)]).collect() }
    }

    pub fn to_model(&self) -> Result<PrecedenceDag> {
        let edges = self
            .edges
            .iter()
            .map(|&[u, v]| Ok((zero_based(u, "edge")?, zero_based(v, "edge")?)))
            .collect::<Result<Vec<_>>>()?;
        PrecedenceDag::new(self.node_count, edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmpsDoc {
    pub n: usize,
    pub m: usize,
    pub lengths: Vec<u64>,
    pub home: Vec<usize>,
    pub dag: DagDoc,
}

impl UmpsDoc {
    pub fn from_model(inst: &UmpsInstance) -> Self {
        UmpsDoc {
            n: inst.n(),
            m: inst.m(),
            lengths: inst.lengths().to_vec(),
            home: inst.homes().iter().map(|&h| one_based(h)).collect(),
            dag: DagDoc::from_model(inst.dag()),
        }
    }

    pub fn to_model(&self) -> Result<UmpsInstance> {
        if self.lengths.len() != self.n || self.dag.node_count != self.n {
            return Err(Error::Format(format!("n = {} disagrees with lengths or dag", self.n)));
        }
        let home = self.home.iter().map(|&h| zero_based(h, "machine")).collect::<Result<Vec<_>>>()?;
        UmpsInstance::new(self.m, self.lengths.clone(), home, self.dag.to_model()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationDoc {
    pub machine: usize,
    pub duration: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobShopDoc {
    pub machines: usize,
    pub jobs: Vec<Vec<OperationDoc>>,
}

impl JobShopDoc {
    pub fn from_model(js: &JobShopInstance) -> Self {
        JobShopDoc {
            machines: js.machines(),
            jobs: js
                .jobs()
                .iter()
                .map(|c| c.iter().map(|o| OperationDoc { machine: one_based(o.machine), duration: o.duration }).collect())
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<JobShopInstance> {
        let jobs = self
            .jobs
            .iter()
            .map(|c| {
                c.iter()
                    .map(|o| Ok(Operation { machine: zero_based(o.machine, "machine")?, duration: o.duration }))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        JobShopInstance::new(self.machines, jobs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MachinesDoc {
    Bounded(usize),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommDelayDoc {
    pub n_total: usize,
    pub lengths: Vec<u64>,
    /// `[u, v, c_uv]` for every edge of `dag`.
    pub delays: Vec<[u64; 3]>,
    pub dag: DagDoc,
    pub machines: MachinesDoc,
}

impl CommDelayDoc {
    pub fn from_model(inst: &CommDelayInstance) -> Self {
        CommDelayDoc {
            n_total: inst.n_total(),
            lengths: inst.lengths().to_vec(),
            delays: inst.delay_edges().map(|(u, v, c)| [u as u64 + 1, v as u64 + 1, c]).collect(),
            dag: DagDoc::from_model(inst.dag()),
            machines: match inst.machines() {
                Machines::Bounded(m) => MachinesDoc::Bounded(m),
                Machines::Unbounded => MachinesDoc::Unbounded,
            },
        }
    }

    pub fn to_model(&self) -> Result<CommDelayInstance> {
        if self.lengths.len() != self.n_total || self.dag.node_count != self.n_total {
            return Err(Error::Format(format!("n_total = {} disagrees with lengths or dag", self.n_total)));
        }
        let dag = self.dag.to_model()?;
        let mut delays = Vec::with_capacity(dag.edges().len());
        for &(u, v) in dag.edges() {
            let hits: Vec<u64> =
                self.delays.iter().filter(|d| d[0] == u as u64 + 1 && d[1] == v as u64 + 1).map(|d| d[2]).collect();
            match hits.as_slice() {
                [c] => delays.push(*c),
                _ => {
                    return Err(Error::InvalidInstance(format!(
                        "edge ({}, {}) needs exactly one delay entry, found {}",
                        u + 1,
                        v + 1,
                        hits.len()
                    )))
                }
            }
        }
        if self.delays.len() != delays.len() {
            return Err(Error::InvalidInstance("delay entry for a pair that is not an edge".into()));
        }
        let machines = match self.machines {
            MachinesDoc::Bounded(m) => Machines::Bounded(m),
            MachinesDoc::Unbounded => Machines::Unbounded,
        };
        CommDelayInstance::new(self.lengths.clone(), dag, delays, machines)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatedDoc {
    /// Speeds.
    pub machines: Vec<u64>,
    /// Lengths.
    pub jobs: Vec<u64>,
    pub dag: DagDoc,
}

impl RelatedDoc {
    pub fn from_model(inst: &RelatedInstance) -> Self {
        RelatedDoc { machines: inst.speeds().to_vec(), jobs: inst.lengths().to_vec(), dag: DagDoc::from_model(inst.dag()) }
    }

    pub fn to_model(&self) -> Result<RelatedInstance> {
        RelatedInstance::new(self.machines.clone(), self.jobs.clone(), self.dag.to_model()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobGroupDoc {
    pub multiplicity: String,
    pub length: String,
    pub origin_job: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineGroupDoc {
    pub multiplicity: String,
    pub speed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedRelatedDoc {
    pub job_groups: Vec<JobGroupDoc>,
    pub machine_groups: Vec<MachineGroupDoc>,
    pub group_dag: DagDoc,
}

impl GroupedRelatedDoc {
    pub fn from_model(inst: &GroupedRelatedInstance) -> Self {
        GroupedRelatedDoc {
            job_groups: inst
                .job_groups()
                .iter()
                .map(|g| JobGroupDoc {
                    multiplicity: g.multiplicity.to_string(),
                    length: g.length.to_string(),
                    origin_job: one_based(g.origin_job),
                })
                .collect(),
            machine_groups: inst
                .machine_groups()
                .iter()
                .map(|g| MachineGroupDoc { multiplicity: g.multiplicity.to_string(), speed: g.speed.to_string() })
                .collect(),
            group_dag: DagDoc::from_model(inst.group_dag()),
        }
    }

    pub fn to_model(&self) -> Result<GroupedRelatedInstance> {
        let jobs = self
            .job_groups
            .iter()
            .map(|g| {
                Ok(JobGroup {
                    multiplicity: big(&g.multiplicity)?,
                    length: big(&g.length)?,
                    origin_job: zero_based(g.origin_job, "job")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let machines = self
            .machine_groups
            .iter()
            .map(|g| Ok(MachineGroup { multiplicity: big(&g.multiplicity)?, speed: big(&g.speed)? }))
            .collect::<Result<Vec<_>>>()?;
        GroupedRelatedInstance::new(jobs, machines, self.group_dag.to_model()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    /// Per layer, per cell, 1-based vertex indices within the layer.
    pub partition: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPartiteDoc {
    pub k: usize,
    pub n: usize,
    /// `edges[i]` holds the pairs `[a, b]` with `a ∈ V_{i+1}`, `b ∈ V_{i+2}`.
    pub edges: Vec<Vec<[usize; 2]>>,
    #[serde(rename = "Q")]
    pub q: usize,
    pub eps: String,
    pub delta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
}

impl KPartiteDoc {
    pub fn from_model(g: &KPartiteInstance, cert: Option<&KPartiteYesCertificate>) -> Self {
        KPartiteDoc {
            k: g.k(),
            n: g.n(),
            edges: g
                .edge_sets()
                .iter()
                .map(|s| s.iter().map(|&(a, b)| [one_based(a), one_based(b)]).collect())
                .collect(),
            q: g.q(),
            eps: rational::format(&g.eps()),
            delta: rational::format(&g.delta()),
            certificate: cert.map(|c| CertificateDoc {
                partition: c
                    .partition
                    .iter()
                    .map(|layer| layer.iter().map(|cell| cell.iter().map(|&v| one_based(v)).collect()).collect())
                    .collect(),
            }),
        }
    }

    pub fn to_model(&self) -> Result<(KPartiteInstance, Option<KPartiteYesCertificate>)> {
        let edges = self
            .edges
            .iter()
            .map(|s| s.iter().map(|&[a, b]| Ok((zero_based(a, "vertex")?, zero_based(b, "vertex")?))).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let g = KPartiteInstance::new(self.k, self.n, edges, self.q, rat(&self.eps)?, rat(&self.delta)?)?;
        let cert = self
            .certificate
            .as_ref()
            .map(|c| {
                let partition = c
                    .partition
                    .iter()
                    .map(|layer| {
                        layer
                            .iter()
                            .map(|cell| cell.iter().map(|&v| zero_based(v, "vertex")).collect())
                            .collect::<Result<Vec<Vec<_>>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok::<_, Error>(KPartiteYesCertificate { partition })
            })
            .transpose()?;
        Ok((g, cert))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub job: usize,
    pub machine: usize,
    pub start: String,
    pub end: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub entries: Vec<EntryDoc>,
    pub horizon: String,
}

impl ScheduleDoc {
    pub fn from_model(s: &Schedule) -> Self {
        ScheduleDoc {
            entries: s
                .entries()
                .iter()
                .map(|e| EntryDoc {
                    job: one_based(e.job),
                    machine: one_based(e.machine),
                    start: rational::format(&e.start),
                    end: rational::format(&e.end),
                })
                .collect(),
            horizon: rational::format(&s.makespan().unwrap_or_else(|_| rational::zero())),
        }
    }

    pub fn to_model(&self) -> Result<Schedule> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(ScheduledJob {
                    job: zero_based(e.job, "job")?,
                    machine: zero_based(e.machine, "machine")?,
                    start: rat(&e.start)?,
                    end: rat(&e.end)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let s = Schedule::new(entries);
        let horizon = rat(&self.horizon)?;
        let actual = s.makespan().unwrap_or_else(|_| rational::zero());
        if horizon != actual {
            return Err(Error::Format(format!(
                "horizon {} differs from the largest end time {}",
                self.horizon,
                rational::format(&actual)
            )));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalDoc {
    pub horizon: usize,
    /// `mass[l][t]` for job `l + 1` and slot `t + 1`.
    pub mass: Vec<Vec<String>>,
    pub gamma: String,
    pub umps_ref: UmpsDoc,
}

impl FractionalDoc {
    pub fn from_model(fs: &FractionalSchedule) -> Self {
        FractionalDoc {
            horizon: fs.horizon(),
            mass: fs.mass().iter().map(|row| row.iter().map(rational::format).collect()).collect(),
            gamma: rational::format(&fs.gamma()),
            umps_ref: UmpsDoc::from_model(fs.umps()),
        }
    }

    pub fn to_model(&self) -> Result<FractionalSchedule> {
        let mass = self
            .mass
            .iter()
            .map(|row| row.iter().map(|s| rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FractionalSchedule::new(self.umps_ref.to_model()?, self.horizon, rat(&self.gamma)?, mass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementDoc {
    pub group: usize,
    pub machine_group: usize,
    pub start: String,
    pub end: String,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedScheduleDoc {
    pub placements: Vec<PlacementDoc>,
}

impl GroupedScheduleDoc {
    pub fn from_model(gs: &GroupedSchedule) -> Self {
        GroupedScheduleDoc {
            placements: gs
                .placements
                .iter()
                .map(|p| PlacementDoc {
                    group: one_based(p.group),
                    machine_group: one_based(p.machine_group),
                    start: rational::format(&p.start),
                    end: rational::format(&p.end),
                    count: p.count.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<GroupedSchedule> {
        let placements = self
            .placements
            .iter()
            .map(|p| {
                Ok(GroupPlacement {
                    group: zero_based(p.group, "group")?,
                    machine_group: zero_based(p.machine_group, "machine group")?,
                    start: rat(&p.start)?,
                    end: rat(&p.end)?,
                    count: big(&p.count)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupedSchedule { placements })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResultDoc {
    pub optimum: String,
    pub proven_optimal: bool,
    pub states_explored: u64,
    pub schedule: ScheduleDoc,
}

impl SolveResultDoc {
    pub fn from_model(r: &SolveResult) -> Self {
        SolveResultDoc {
            optimum: rational::format(&r.optimum),
            proven_optimal: r.proven_optimal,
            states_explored: r.states_explored,
            schedule: ScheduleDoc::from_model(&r.schedule),
        }
    }

    pub fn to_model(&self) -> Result<SolveResult> {
        Ok(SolveResult {
            optimum: rat(&self.optimum)?,
            schedule: self.schedule.to_model()?,
            proven_optimal: self.proven_optimal,
            states_explored: self.states_explored,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommDelayArtifactDoc {
    pub source: UmpsDoc,
    pub output: CommDelayDoc,
    pub c_infinity: u64,
    pub dummy_ids: Vec<usize>,
    /// Source job of each non-dummy output job.
    pub origin: Vec<usize>,
}

impl CommDelayArtifactDoc {
    pub fn from_model(a: &CommDelayReductionArtifact) -> Self {
        CommDelayArtifactDoc {
            source: UmpsDoc::from_model(&a.source),
            output: CommDelayDoc::from_model(&a.output),
            c_infinity: a.c_infinity,
            dummy_ids: a.dummy_ids.iter().map(|&d| one_based(d)).collect(),
            origin: a.origin.iter().map(|&o| one_based(o)).collect(),
        }
    }

    pub fn to_model(&self) -> Result<CommDelayReductionArtifact> {
        let art = CommDelayReductionArtifact {
            source: self.source.to_model()?,
            output: self.output.to_model()?,
            c_infinity: self.c_infinity,
            dummy_ids: self.dummy_ids.iter().map(|&d| zero_based(d, "job")).collect::<Result<_>>()?,
            origin: self.origin.iter().map(|&o| zero_based(o, "job")).collect::<Result<_>>()?,
        };
        Ok(art)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatedArtifactDoc {
    pub source: UmpsDoc,
    pub output: GroupedRelatedDoc,
    pub kappa: String,
    pub sound_kappa: bool,
    pub origin: Vec<usize>,
    pub machine_group_of: Vec<usize>,
}

impl RelatedArtifactDoc {
    pub fn from_model(a: &RelatedReductionArtifact) -> Self {
        RelatedArtifactDoc {
            source: UmpsDoc::from_model(&a.source),
            output: GroupedRelatedDoc::from_model(&a.output),
            kappa: a.kappa.to_string(),
            sound_kappa: a.sound_kappa,
            origin: a.origin.iter().map(|&o| one_based(o)).collect(),
            machine_group_of: a.machine_group_of.iter().map(|&g| one_based(g)).collect(),
        }
    }

    pub fn to_model(&self) -> Result<RelatedReductionArtifact> {
        Ok(RelatedReductionArtifact {
            source: self.source.to_model()?,
            output: self.output.to_model()?,
            kappa: big(&self.kappa)?,
            sound_kappa: self.sound_kappa,
            origin: self.origin.iter().map(|&o| zero_based(o, "job")).collect::<Result<_>>()?,
            machine_group_of: self
                .machine_group_of
                .iter()
                .map(|&g| zero_based(g, "machine group"))
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobShopArtifactDoc {
    pub source: JobShopDoc,
    /// `[job, operation]` of each output job.
    pub origin: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KPartiteArtifactDoc {
    pub source: KPartiteDoc,
    /// Planted offsets `t_i` per layer.
    pub offsets: Vec<String>,
}
