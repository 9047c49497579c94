//! The `sched-reduce` command line.

pub mod format;
pub mod gap;

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::generators::{
    gen_fractional, gen_jobshop, gen_kpartite_dense, gen_kpartite_yes_with_prob, gen_layered_umps,
    gen_random_umps_with_lengths,
};
use crate::model::{validate_commdelay, validate_related, validate_umps, Machines, ValidationReport};
use crate::rational::{self, Rational};
use crate::reductions::{
    jobshop_to_umps, kpartite_to_umps, umps_to_commdelay, umps_to_related, validate_grouped, yes_offsets,
};
use crate::solvers::{
    greedy_umps, list_schedule_commdelay, list_schedule_related, solve_commdelay_exact, solve_related_exact,
    solve_umps_exact, SolveLimits, SolveResult,
};
use format::*;
use gap::{render_csv, roundtrip_commdelay, roundtrip_kpartite, roundtrip_related, GapRow};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Violated = 1,
    Usage = 2,
    Budget = 3,
}

impl Exit {
    pub fn for_error(e: &Error) -> Exit {
        match e {
            Error::BudgetExceeded(_) => Exit::Budget,
            Error::InfeasibleInput(_)
            | Error::CoLocationViolated { .. }
            | Error::MakespanTooLarge { .. }
            | Error::MisplacedFractionExceeded(_)
            | Error::PropertyViolated(_)
            | Error::TooManyJobsPerSlot { .. }
            | Error::InvalidCertificate(_) => Exit::Violated,
            _ => Exit::Usage,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sched-reduce", version, about = "Scheduling reductions, exact solvers and gap certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance from a seeded family.
    Gen(GenArgs),
    /// Apply a reduction; writes the output and `<out>.artifact.json`.
    Reduce(ReduceArgs),
    /// Solve an instance exactly or with a list-scheduling baseline.
    Solve(SolveArgs),
    /// Check a schedule against an instance.
    Verify(VerifyArgs),
    /// Reduce, solve both sides and emit a gap row.
    Roundtrip(RoundtripArgs),
    /// Run roundtrip over every `.json` instance in a directory.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: Family,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Layered UMPS: edges only from machine i to machine i+1.
    Layered {
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        edge_prob: Rational,
    },
    /// UMPS with random homes and a random DAG.
    RandomUmps {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        edge_prob: Rational,
        #[arg(long, default_value_t = 1)]
        max_len: u64,
    },
    Jobshop {
        #[arg(long)]
        jobs: usize,
        #[arg(long)]
        machines: usize,
        #[arg(long)]
        ops: usize,
    },
    /// k-partite instance with a planted staircase partition.
    KpartiteYes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        edge_prob: Rational,
    },
    /// Dense k-partite instance, a NO candidate.
    KpartiteDense {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "9/10", value_parser = parse_rational)]
        density: Rational,
    },
    /// Perturbs an integral UMPS schedule into a fractional one.
    Fractional {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Defaults to 1/(10n²).
        #[arg(long, value_parser = parse_rational)]
        gamma: Option<Rational>,
        #[arg(long, default_value = "1/2", value_parser = parse_rational)]
        split_prob: Rational,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    UmpsToCommdelay,
    UmpsToRelated,
    JobshopToUmps,
    KpartiteToUmps,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    pub reduction: Reduction,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub kappa_override: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    Exact,
    /// Greedy for UMPS, list scheduling for the other models.
    List,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub solver: SolverKind,
    /// `max_jobs=..,max_states=..,time_budget=<seconds|none>`
    #[arg(long, value_parser = parse_limits)]
    pub limits: Option<SolveLimits>,
    /// Machine count for list scheduling on unbounded machines.
    #[arg(long)]
    pub machines: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Not needed for fractional schedules, which are checked on their own.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Commdelay,
    Related,
    Kpartite,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub kappa_override: Option<u128>,
    #[arg(long, value_parser = parse_limits)]
    pub limits: Option<SolveLimits>,
    /// Fill the wall_ms column; off by default so output is reproducible.
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub kappa_override: Option<u128>,
    #[arg(long, value_parser = parse_limits)]
    pub limits: Option<SolveLimits>,
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

pub fn parse_limits(s: &str) -> std::result::Result<SolveLimits, String> {
    let mut lim = SolveLimits::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, found {part:?}"))?;
        let num = || value.trim().parse::<u64>().map_err(|_| format!("bad value for {key}: {value:?}"));
        match key.trim() {
            "max_jobs" => lim.max_jobs = num()? as usize,
            "max_states" => lim.max_states = num()?,
            "time_budget" if value.trim() == "none" => lim.time_budget = None,
            "time_budget" => lim.time_budget = Some(Duration::from_secs(num()?)),
            other => return Err(format!("unknown limit {other:?}")),
        }
    }
    Ok(lim)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `<out>.artifact.json` next to the reduction output.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".artifact.json");
    PathBuf::from(s)
}

pub fn run(cli: Cli) -> Result<Exit> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Roundtrip(a) => cmd_roundtrip(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

pub fn cmd_gen(a: GenArgs) -> Result<Exit> {
    let seed = a.seed;
    let doc = match a.family {
        Family::Layered { layers, width, edge_prob } => {
            Document::Umps(UmpsDoc::from_model(&gen_layered_umps(layers, width, edge_prob, seed)?))
        }
        Family::RandomUmps { n, m, edge_prob, max_len } => {
            Document::Umps(UmpsDoc::from_model(&gen_random_umps_with_lengths(n, m, edge_prob, max_len, seed)?))
        }
        Family::Jobshop { jobs, machines, ops } => {
            Document::Jobshop(JobShopDoc::from_model(&gen_jobshop(jobs, machines, ops, seed)?))
        }
        Family::KpartiteYes { n, k, edge_prob } => {
            let (g, cert) = gen_kpartite_yes_with_prob(n, k, edge_prob, seed)?;
            Document::Kpartite(KPartiteDoc::from_model(&g, Some(&cert)))
        }
        Family::KpartiteDense { n, k, density } => {
            Document::Kpartite(KPartiteDoc::from_model(&gen_kpartite_dense(n, k, density, seed)?, None))
        }
        Family::Fractional { instance, schedule, gamma, split_prob } => {
            let inst = Document::read(&instance)?.into_umps()?;
            let sched = Document::read(&schedule)?.into_schedule()?;
            let gamma = gamma.unwrap_or_else(|| crate::rounding::standard_gamma(inst.n()));
            Document::Fractional(FractionalDoc::from_model(&gen_fractional(&inst, &sched, gamma, split_prob, seed)?))
        }
    };
    emit(a.out.as_deref(), &doc.render())?;
    Ok(Exit::Ok)
}

pub fn cmd_reduce(a: ReduceArgs) -> Result<Exit> {
    let input = Document::read(&a.input)?;
    let (output, artifact) = match a.reduction {
        Reduction::UmpsToCommdelay => {
            let art = umps_to_commdelay(&input.into_umps()?)?;
            (
                Document::Commdelay(CommDelayDoc::from_model(&art.output)),
                Document::CommdelayArtifact(CommDelayArtifactDoc::from_model(&art)),
            )
        }
        Reduction::UmpsToRelated => {
            let art = umps_to_related(&input.into_umps()?, a.kappa_override)?;
            (
                Document::RelatedGrouped(GroupedRelatedDoc::from_model(&art.output)),
                Document::RelatedArtifact(RelatedArtifactDoc::from_model(&art)),
            )
        }
        Reduction::JobshopToUmps => {
            let js = match input {
                Document::Jobshop(d) => d,
                other => {
                    return Err(Error::WrongKind { expected: "jobshop".into(), found: other.kind().into() })
                }
            };
            let (umps, origin) = jobshop_to_umps(&js.to_model()?)?;
            (
                Document::Umps(UmpsDoc::from_model(&umps)),
                Document::JobshopArtifact(JobShopArtifactDoc {
                    source: js,
                    origin: origin.iter().map(|&(j, k)| [j + 1, k + 1]).collect(),
                }),
            )
        }
        Reduction::KpartiteToUmps => {
            let (g, cert) = input.into_kpartite()?;
            (
                Document::Umps(UmpsDoc::from_model(&kpartite_to_umps(&g)?)),
                Document::KpartiteArtifact(KPartiteArtifactDoc {
                    source: KPartiteDoc::from_model(&g, cert.as_ref()),
                    offsets: yes_offsets(&g).iter().map(rational::format).collect(),
                }),
            )
        }
    };
    output.write(&a.out)?;
    artifact.write(&sidecar_path(&a.out))?;
    Ok(Exit::Ok)
}

pub fn cmd_solve(a: SolveArgs) -> Result<Exit> {
    let lim = a.limits.unwrap_or_default();
    let doc = Document::read(&a.input)?;
    let result = match (doc, a.solver) {
        (Document::Umps(d), SolverKind::Exact) => solve_umps_exact(&d.to_model()?, &lim)?,
        (Document::Commdelay(d), SolverKind::Exact) => solve_commdelay_exact(&d.to_model()?, &lim)?,
        (Document::Related(d), SolverKind::Exact) => solve_related_exact(&d.to_model()?, &lim)?,
        (Document::Umps(d), SolverKind::List) => {
            let inst = d.to_model()?;
            heuristic_result(greedy_umps(&inst, &inst.dag().topological_order()?)?)?
        }
        (Document::Commdelay(d), SolverKind::List) => {
            let inst = d.to_model()?;
            let m = match (inst.machines(), a.machines) {
                (_, Some(m)) => m,
                (Machines::Bounded(m), None) => m,
                (Machines::Unbounded, None) => inst.n_total(),
            };
            heuristic_result(list_schedule_commdelay(&inst, m, &inst.dag().topological_order()?)?)?
        }
        (Document::Related(d), SolverKind::List) => heuristic_result(list_schedule_related(&d.to_model()?)?)?,
        (other, _) => {
            return Err(Error::WrongKind { expected: "umps, commdelay or related".into(), found: other.kind().into() })
        }
    };
    emit(a.out.as_deref(), &Document::SolveResult(SolveResultDoc::from_model(&result)).render())?;
    if !result.proven_optimal && a.solver == SolverKind::Exact {
        eprintln!("budget exhausted; reporting the best schedule found");
        return Ok(Exit::Budget);
    }
    Ok(Exit::Ok)
}

fn heuristic_result(s: crate::model::Schedule) -> Result<SolveResult> {
    Ok(SolveResult { optimum: s.makespan()?, schedule: s, proven_optimal: false, states_explored: 0 })
}

fn report_exit(report: &ValidationReport, makespan: Option<Rational>) -> Exit {
    match (report.feasible(), makespan) {
        (true, Some(ms)) => println!("feasible makespan={}", rational::format(&ms)),
        _ => println!("{report}"),
    }
    if report.feasible() {
        Exit::Ok
    } else {
        Exit::Violated
    }
}

pub fn cmd_verify(a: VerifyArgs) -> Result<Exit> {
    let inst = Document::read(&a.instance)?;
    if let Document::Fractional(d) = inst {
        return match d.to_model().and_then(|fs| fs.check_properties()) {
            Ok(()) => {
                println!("feasible");
                Ok(Exit::Ok)
            }
            Err(e @ Error::PropertyViolated(_)) => {
                println!("infeasible: {e}");
                Ok(Exit::Violated)
            }
            Err(e) => Err(e),
        };
    }
    let path = a.schedule.ok_or_else(|| Error::Format("--schedule is required for this instance kind".into()))?;
    let sched_doc = Document::read(&path)?;
    if let Document::RelatedGrouped(d) = inst {
        let gs = match sched_doc {
            Document::GroupedSchedule(g) => g.to_model()?,
            other => return Err(Error::WrongKind { expected: "grouped_schedule".into(), found: other.kind().into() }),
        };
        let report = validate_grouped(&d.to_model()?, &gs)?;
        return Ok(report_exit(&report, gs.makespan().ok()));
    }
    let sched = sched_doc.into_schedule()?;
    let report = match inst {
        Document::Umps(d) => validate_umps(&d.to_model()?, &sched)?,
        Document::Commdelay(d) => validate_commdelay(&d.to_model()?, &sched)?,
        Document::Related(d) => validate_related(&d.to_model()?, &sched)?,
        other => {
            return Err(Error::WrongKind {
                expected: "umps, commdelay, related, related_grouped or fractional".into(),
                found: other.kind().into(),
            })
        }
    };
    Ok(report_exit(&report, sched.makespan().ok()))
}

fn instance_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn row_for(id: &str, doc: Document, mode: Mode, kappa: Option<u128>, lim: &SolveLimits, timing: bool) -> Result<GapRow> {
    match mode {
        Mode::Commdelay => roundtrip_commdelay(id, &doc.into_umps()?, lim, timing),
        Mode::Related => roundtrip_related(id, &doc.into_umps()?, kappa, lim, timing),
        Mode::Kpartite => {
            let (g, cert) = doc.into_kpartite()?;
            roundtrip_kpartite(id, &g, cert.as_ref(), lim, timing)
        }
    }
}

fn rows_exit(rows: &[GapRow]) -> Exit {
    for r in rows.iter().filter(|r| !r.proven) {
        eprintln!("{}: solver budget exhausted, row compares best-found values", r.instance_id);
    }
    if rows.iter().any(|r| !r.bound_holds) {
        Exit::Violated
    } else if rows.iter().any(|r| !r.proven) {
        Exit::Budget
    } else {
        Exit::Ok
    }
}

pub fn cmd_roundtrip(a: RoundtripArgs) -> Result<Exit> {
    let lim = a.limits.unwrap_or_default();
    let doc = Document::read(&a.input)?;
    let row = row_for(&instance_id(&a.input), doc, a.mode, a.kappa_override, &lim, a.timing)?;
    let rows = [row];
    emit(a.out.as_deref(), &render_csv(&rows))?;
    Ok(rows_exit(&rows))
}

/// Every `.json` file of the corpus: UMPS instances get a `commdelay` row
/// and, when unit-length, a `related` row; k-partite instances get a
/// `kpartite` row. Other kinds are skipped.
pub fn bench_rows(corpus: &Path, kappa: Option<u128>, lim: &SolveLimits, timing: bool) -> Result<Vec<GapRow>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus)
        .map_err(|e| Error::Io(format!("{}: {e}", corpus.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().ends_with(".artifact.json"))
        .collect();
    paths.sort();
    let mut rows = Vec::new();
    for p in paths {
        let doc = Document::read(&p)?;
        let stem = instance_id(&p);
        let modes: Vec<Mode> = match &doc {
            Document::Umps(d) if d.lengths.iter().all(|&x| x == 1) => vec![Mode::Commdelay, Mode::Related],
            Document::Umps(_) => vec![Mode::Commdelay],
            Document::Kpartite(_) => vec![Mode::Kpartite],
            other => {
                eprintln!("{}: skipping {} document", p.display(), other.kind());
                continue;
            }
        };
        for mode in modes {
            let id = format!("{stem}:{}", mode.to_possible_value().unwrap().get_name());
            rows.push(row_for(&id, doc.clone(), mode, kappa, lim, timing)?);
        }
    }
    rows.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
    Ok(rows)
}

pub fn cmd_bench(a: BenchArgs) -> Result<Exit> {
    let lim = a.limits.unwrap_or_default();
    let rows = bench_rows(&a.corpus, a.kappa_override, &lim, a.timing)?;
    emit(a.out.as_deref(), &render_csv(&rows))?;
    Ok(rows_exit(&rows))
}
