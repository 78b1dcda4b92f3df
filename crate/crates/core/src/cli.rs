//! Command-line front end. `run` parses arguments, dispatches, prints a report
//! (human text or `--json`) and returns the process exit code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::ansatz::AnsatzSet;
use crate::circuit::{default_stage_schedule, verify_pairing, Distances, PairingViolation, StageSchedule};
use crate::costs::{space_cost, time_cost};
use crate::cycle::{simulate, CycleConfig, CycleStats};
use crate::engine::{evaluate_scheme, sweep_single, PerformanceReport, SweepConstraints, SweepGrid, Tables};
use crate::error::{domain, Error, Result};
use crate::fit::{fit_model, loocv_select, CorrectionModel, FitResult, LoocvScore, SampleSet};
use crate::grow::GrowRateTable;
use crate::layout::{verify_layout, LayoutViolation};
use crate::schedules::{enumerate_valid, representatives, validate_schedule, GateSchedule, ScheduleReport};
use crate::scheme::SchemeParams;

#[derive(Parser, Debug)]
#[command(name = "msdforge", version, about = "Magic state distillation cost and infidelity models for 2D color codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Space, time and effective spacetime cost of one scheme point.
    Cost(SchemeArgs),
    /// Output infidelity and success probability of one scheme point.
    Infidelity(SchemeArgs),
    /// Single-level sweep over distance grids; CSV of infidelity vs effective spacetime.
    Sweep(SweepArgs),
    /// Pairing condition and layout requirements for a distance tuple.
    VerifyLayout(LayoutArgs),
    /// Enumerate or validate syndrome-extraction gate schedules.
    Schedules(ScheduleArgs),
    /// Monte Carlo of the magic-state preparation cycle.
    CycleSim(CycleArgs),
    /// Fit the failure-rate ansatz to sample data, optionally ranking models by LOOCV.
    Fit(FitArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    Sng,
    Cmb,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Machine-readable JSON output.
    #[arg(long)]
    pub json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    /// Growing-rate CSV merged over the bundled anchors.
    #[arg(long = "grow-table")]
    pub grow_table: Option<PathBuf>,
    /// Ansatz parameter JSON replacing the bundled set.
    #[arg(long)]
    pub ansatz: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "sng")]
    pub scheme: SchemeKind,
    /// Distances `d_out,d_X,d_Z,d_m`.
    #[arg(long)]
    pub d: Distances,
    #[arg(long)]
    pub dcult: Option<u32>,
    #[arg(long)]
    pub nm: Option<u32>,
    #[arg(long)]
    pub cgap: Option<f64>,
    /// Physical error rate.
    #[arg(long, default_value_t = 1e-3)]
    pub p: f64,
    /// Y-ratio of the logical failure rates.
    #[arg(long, default_value_t = 0.1)]
    pub ry: f64,
    /// Rounds between stage starts; simulated when omitted.
    #[arg(long)]
    pub tintv: Option<f64>,
    /// Rounds a state idles before use; simulated when omitted.
    #[arg(long)]
    pub tidle: Option<f64>,
    /// Cultivation output infidelity.
    #[arg(long)]
    pub qcult: Option<f64>,
    /// Seed for the cycle simulation.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tables: TableArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// d_out values: list `a,b,c` or range `lo:hi[:step]`.
    #[arg(long = "dout", default_value = "11:41:2")]
    pub d_out: String,
    #[arg(long = "dx", default_value = "6:16:2")]
    pub d_x: String,
    #[arg(long = "dz", default_value = "6:28:2")]
    pub d_z: String,
    #[arg(long = "dm", default_value = "5:27:2")]
    pub d_m: String,
    #[arg(long, default_value_t = 1e-3)]
    pub p: f64,
    #[arg(long, default_value_t = 0.1)]
    pub ry: f64,
    #[arg(long = "max-qdist")]
    pub max_q_dist: Option<f64>,
    #[arg(long = "max-space")]
    pub max_space: Option<u64>,
    /// Keep only the Pareto frontier.
    #[arg(long)]
    pub pareto: bool,
    #[arg(long)]
    pub ansatz: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct LayoutArgs {
    #[arg(long)]
    pub d: Distances,
    /// JSON list of eight `[P, Q]` label pairs; the default schedule otherwise.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ScheduleArgs {
    /// Enumerate every valid schedule of this length.
    #[arg(long)]
    pub length: Option<u32>,
    /// Print only the number of schedules.
    #[arg(long)]
    pub count: bool,
    /// One schedule per patch-symmetry orbit.
    #[arg(long)]
    pub representatives: bool,
    /// Validate a schedule `a,b,c,d,e,f;g,h,i,j,k,l`.
    #[arg(long, conflicts_with = "length")]
    pub check: Option<GateSchedule>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CycleArgs {
    /// Distances `d_out,d_X,d_Z,d_m` (only d_m is used).
    #[arg(long)]
    pub d: Distances,
    #[arg(long)]
    pub dcult: u32,
    #[arg(long)]
    pub nm: u32,
    #[arg(long, default_value_t = 0.0)]
    pub cgap: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Recorded stages after warm-up.
    #[arg(long, default_value_t = 1000)]
    pub stages: usize,
    /// Override the growing acceptance rate.
    #[arg(long = "pacc")]
    pub p_acc: Option<f64>,
    #[arg(long = "grow-table")]
    pub grow_table: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    /// Sample CSV with header `p,d,failures,shots`.
    #[arg(long)]
    pub data: PathBuf,
    /// Correction models, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "zeta-d-pow")]
    pub models: Vec<CorrectionModel>,
    /// Rank the models by leave-one-out cross-validation.
    #[arg(long)]
    pub loocv: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub scheme: String,
    pub space: u64,
    pub time: f64,
    pub t_intv: Option<f64>,
    pub q_succ: Option<f64>,
    pub effective_spacetime: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfidelityReport {
    pub report: PerformanceReport,
    pub t_intv: Option<f64>,
    pub t_idle: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutReport {
    pub distances: Distances,
    pub pairing: Vec<PairingViolation>,
    pub layout: Vec<LayoutViolation>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleList {
    pub length: u32,
    pub count: usize,
    pub schedules: Vec<GateSchedule>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub config: CycleConfig,
    pub stats: CycleStats,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub fits: Vec<FitResult>,
    pub loocv: Option<Vec<LoocvScore>>,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("msdforge: {e}");
            e.exit_code()
        }
    }
}

/// Dispatches one command, writing its report.
pub fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Cost(a) => {
            let r = cmd_cost(a)?;
            emit(&a.output, &r, || human_cost(&r))
        }
        Command::Infidelity(a) => {
            let r = cmd_infidelity(a)?;
            emit(&a.output, &r, || human_infidelity(&r))
        }
        Command::Sweep(a) => {
            let rows = cmd_sweep(a)?;
            if a.output.json {
                write_out(&a.output.out, &serde_json::to_string_pretty(&rows)?)
            } else {
                write_out(&a.output.out, &sweep_csv(&rows)?)
            }
        }
        Command::VerifyLayout(a) => {
            let r = cmd_verify_layout(a)?;
            emit(&a.output, &r, || human_layout(&r))
        }
        Command::Schedules(a) => cmd_schedules(a),
        Command::CycleSim(a) => {
            let r = cmd_cycle_sim(a)?;
            emit(&a.output, &r, || human_cycle(&r))
        }
        Command::Fit(a) => {
            let r = cmd_fit(a)?;
            emit(&a.output, &r, || human_fit(&r))
        }
    }
}

fn emit<T: Serialize>(out: &OutputArgs, value: &T, human: impl FnOnce() -> String) -> Result<()> {
    let text = if out.json { serde_json::to_string_pretty(value)? } else { human() };
    write_out(&out.out, &text)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    let text = if text.ends_with('\n') { text.to_owned() } else { format!("{text}\n") };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Data(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn existing(path: &Path) -> Result<&Path> {
    if path.exists() {
        Ok(path)
    } else {
        Err(Error::Data(format!("{} does not exist", path.display())))
    }
}

fn load_ansatz(path: &Option<PathBuf>) -> Result<AnsatzSet> {
    match path {
        Some(p) => AnsatzSet::load(existing(p)?),
        None => AnsatzSet::builtin(),
    }
}

fn load_tables(grow: &Option<PathBuf>) -> Result<Tables> {
    let mut t = Tables::bundled()?;
    if let Some(p) = grow {
        t.grow = t.grow.merged(&GrowRateTable::load(existing(p)?)?)?;
    }
    Ok(t)
}

/// Scheme parameters from flags; cultivation points without `--tintv` get
/// T_intv and T_idle from the cycle simulation.
pub fn scheme_from_args(a: &SchemeArgs, tables: &Tables) -> Result<(SchemeParams, Vec<String>)> {
    let mut notes = Vec::new();
    let mut s = match a.scheme {
        SchemeKind::Sng => {
            if a.dcult.is_some() || a.nm.is_some() || a.cgap.is_some() {
                notes.push("--dcult/--nm/--cgap are ignored for sng".into());
            }
            SchemeParams::single(a.d, a.p, a.ry)
        }
        SchemeKind::Cmb => {
            let (Some(dc), Some(nm)) = (a.dcult, a.nm) else {
                return domain("cmb needs --dcult and --nm");
            };
            let c_gap = a.cgap.or((a.d.d_m == dc).then_some(0.0));
            let mut s = SchemeParams::combined(a.d, dc, nm, 0.0, a.p, a.ry);
            s.c_gap = c_gap;
            s.t_intv = a.tintv;
            s.t_idle = a.tidle;
            s.q_cult = a.qcult;
            s
        }
    };
    s.validate()?;
    if a.scheme == SchemeKind::Cmb && (s.t_intv.is_none() || s.t_idle.is_none()) {
        match s.c_gap {
            Some(c_gap) => {
                let (mut cfg, note) = CycleConfig::from_tables(a.p, s.d_cult.unwrap(), s.n_m.unwrap(), a.d.d_m, c_gap, tables)?;
                cfg.seed = a.seed;
                notes.extend(note);
                let st = simulate(&cfg)?;
                notes.push(format!(
                    "T_intv/T_idle from cycle simulation (seed {}, {} stages): {:.3} / {:.3}",
                    a.seed, st.stages, st.t_intv_mean, st.t_idle_mean
                ));
                s.t_intv.get_or_insert(st.t_intv_mean);
                s.t_idle.get_or_insert(st.t_idle_mean);
            }
            None if s.t_intv.is_none() => return domain("cmb without --tintv needs --cgap to simulate the cycle"),
            None => notes.push("T_idle unknown without --cgap or --tidle".into()),
        }
    }
    Ok((s, notes))
}

pub fn cmd_cost(a: &SchemeArgs) -> Result<CostReport> {
    let tables = load_tables(&a.tables.grow_table)?;
    let (s, mut notes) = scheme_from_args(a, &tables)?;
    let space = space_cost(&s)?;
    let time = time_cost(&s, None)?;
    let set = load_ansatz(&a.tables.ansatz)?;
    let q_succ = match evaluate_scheme(&s, &default_stage_schedule(), &set, &tables) {
        Ok(r) => Some(r.q_succ),
        Err(e) => {
            notes.push(format!("effective cost unavailable: {e}"));
            None
        }
    };
    Ok(CostReport {
        scheme: s.label(),
        space,
        time,
        t_intv: s.t_intv,
        q_succ,
        effective_spacetime: q_succ.map(|q| space as f64 * time / q),
        notes,
    })
}

pub fn cmd_infidelity(a: &SchemeArgs) -> Result<InfidelityReport> {
    let tables = load_tables(&a.tables.grow_table)?;
    let (s, notes) = scheme_from_args(a, &tables)?;
    let set = load_ansatz(&a.tables.ansatz)?;
    let report = evaluate_scheme(&s, &default_stage_schedule(), &set, &tables)?;
    Ok(InfidelityReport { report, t_intv: s.t_intv, t_idle: s.t_idle, notes })
}

/// `a,b,c` or `lo:hi[:step]` (inclusive).
pub fn parse_values(s: &str) -> Result<Vec<u32>> {
    let bad = |t: &str| Error::Domain(format!("bad distance value {t:?} in {s:?}"));
    if s.contains(':') {
        let parts: Vec<u32> = s.split(':').map(|t| t.trim().parse().map_err(|_| bad(t))).collect::<Result<_>>()?;
        let (lo, hi, step) = match parts[..] {
            [lo, hi] => (lo, hi, 1),
            [lo, hi, step] if step > 0 => (lo, hi, step),
            _ => return Err(bad(s)),
        };
        return Ok((lo..=hi).step_by(step as usize).collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().map_err(|_| bad(t))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub d: Distances,
    pub q_dist: f64,
    pub q_succ: f64,
    pub space: u64,
    pub time: f64,
    pub effective_spacetime: f64,
    pub pareto: bool,
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Vec<SweepRow>> {
    let grid = SweepGrid { d_out: parse_values(&a.d_out)?, d_x: parse_values(&a.d_x)?, d_z: parse_values(&a.d_z)?, d_m: parse_values(&a.d_m)? };
    let set = load_ansatz(&a.ansatz)?;
    let constraints = SweepConstraints { max_q_dist: a.max_q_dist, max_space: a.max_space };
    let (reports, front) = sweep_single(&grid, a.p, a.ry, &default_stage_schedule(), &set, constraints)?;
    let rows: Vec<SweepRow> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| SweepRow {
            d: r.d,
            q_dist: r.q_dist_exact,
            q_succ: r.q_succ,
            space: r.space,
            time: r.time,
            effective_spacetime: r.effective_spacetime,
            pareto: front.contains(&i),
        })
        .filter(|r| !a.pareto || r.pareto)
        .collect();
    if rows.is_empty() {
        return domain("no admissible points satisfy the sweep constraints");
    }
    Ok(rows)
}

fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d_out", "d_x", "d_z", "d_m", "q_dist", "q_succ", "space", "time", "effective_spacetime", "pareto"])?;
    for r in rows {
        w.write_record([
            r.d.d_out.to_string(),
            r.d.d_x.to_string(),
            r.d.d_z.to_string(),
            r.d.d_m.to_string(),
            r.q_dist.to_string(),
            r.q_succ.to_string(),
            r.space.to_string(),
            r.time.to_string(),
            r.effective_spacetime.to_string(),
            r.pareto.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Data(e.to_string()))
}

pub fn load_stage_schedule(path: &Option<PathBuf>) -> Result<StageSchedule> {
    match path {
        None => Ok(default_stage_schedule()),
        Some(p) => {
            let text = std::fs::read_to_string(existing(p)?)?;
            let pairs: Vec<(String, String)> = serde_json::from_str(&text)?;
            StageSchedule::from_labels(&pairs)
        }
    }
}

pub fn cmd_verify_layout(a: &LayoutArgs) -> Result<LayoutReport> {
    a.d.check_parity()?;
    let sched = load_stage_schedule(&a.schedule)?;
    let pairing = verify_pairing(&sched, a.d)?;
    let layout = verify_layout(&sched, a.d)?;
    let ok = pairing.is_empty() && layout.iter().all(|v| v.informational);
    Ok(LayoutReport { distances: a.d, pairing, layout, ok })
}

fn cmd_schedules(a: &ScheduleArgs) -> Result<()> {
    if let Some(s) = &a.check {
        let r: ScheduleReport = validate_schedule(s);
        return emit(&a.output, &r, || human_schedule_check(&r));
    }
    let Some(length) = a.length else {
        return domain("schedules needs --length or --check");
    };
    let mut list = enumerate_valid(length)?;
    if a.representatives {
        list = representatives(&list);
    }
    let report = ScheduleList { length, count: list.len(), schedules: if a.count { Vec::new() } else { list } };
    if a.count {
        return emit(&a.output, &report, || report.count.to_string());
    }
    emit(&a.output, &report, || report.schedules.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("\n"))
}

pub fn cmd_cycle_sim(a: &CycleArgs) -> Result<CycleReport> {
    let tables = load_tables(&a.grow_table)?;
    let (mut config, note) = CycleConfig::from_tables(a.p, a.dcult, a.nm, a.d.d_m, a.cgap, &tables)?;
    let mut notes: Vec<String> = Vec::new();
    if let Some(acc) = a.p_acc {
        config.p_acc = acc;
    } else {
        notes.extend(note);
    }
    config.seed = a.seed;
    config.n_stages = a.stages;
    let stats = simulate(&config)?;
    Ok(CycleReport { config, stats, notes })
}

pub fn cmd_fit(a: &FitArgs) -> Result<FitReport> {
    let data = SampleSet::load(existing(&a.data)?)?;
    if a.models.is_empty() {
        return domain("no correction models given");
    }
    let fits = a.models.iter().map(|&m| fit_model(&data, m)).collect::<Result<Vec<_>>>()?;
    let loocv = if a.loocv { Some(loocv_select(&data, &a.models)?) } else { None };
    Ok(FitReport { fits, loocv })
}

fn human_cost(r: &CostReport) -> String {
    let mut s = format!("{}\nspace  {}\ntime   {}\n", r.scheme, r.space, r.time);
    if let Some(t) = r.t_intv {
        let _ = writeln!(s, "T_intv {t}");
    }
    if let (Some(q), Some(e)) = (r.q_succ, r.effective_spacetime) {
        let _ = writeln!(s, "q_succ {q}\neffective_spacetime {e:e}");
    }
    notes(&mut s, &r.notes);
    s
}

fn human_infidelity(r: &InfidelityReport) -> String {
    let p = &r.report;
    let mut s = format!(
        "{} at p = {:e}, r_Y = {}\nq_dist (exact)    {:e}\nq_dist (analytic) {:e}\nq_succ (exact)    {}\nq_succ (analytic) {}\nspace {}  time {}  effective_spacetime {:e}\n",
        p.scheme, p.p, p.r_y, p.q_dist_exact, p.q_dist_analytic, p.q_succ, p.q_succ_analytic, p.space, p.time, p.effective_spacetime
    );
    if let (Some(a), Some(b)) = (r.t_intv, r.t_idle) {
        let _ = writeln!(s, "T_intv {a}  T_idle {b}");
    }
    notes(&mut s, &r.notes);
    s
}

fn human_layout(r: &LayoutReport) -> String {
    let d = r.distances;
    let mut s = format!("({}, {}, {}, {}): {}\n", d.d_out, d.d_x, d.d_z, d.d_m, if r.ok { "ok" } else { "violations found" });
    for v in &r.pairing {
        let _ = writeln!(s, "pairing {:?} stage {:?}: {}", v.item, v.stage, v.detail);
    }
    for v in &r.layout {
        let seq: Vec<String> = v.endpoint_sequence.iter().map(|o| o.to_string()).collect();
        let _ = writeln!(
            s,
            "layout stage {} patch {} [{}]: need {}, have {}{}",
            v.stage,
            v.patch_index,
            seq.join(" "),
            v.required,
            v.available,
            if v.informational { " (informational)" } else { "" }
        );
    }
    s
}

fn human_schedule_check(r: &ScheduleReport) -> String {
    let mut s = format!("{}: {}\n", r.schedule, if r.is_valid() { "valid" } else { "invalid" });
    for t in &r.repeated {
        let _ = writeln!(s, "  {t}");
    }
    for t in &r.nonpositive {
        let _ = writeln!(s, "  {t} <= 0");
    }
    for t in &r.auxiliary_nonpositive {
        let _ = writeln!(s, "  auxiliary {t} <= 0");
    }
    s
}

fn human_cycle(r: &CycleReport) -> String {
    let (c, st) = (&r.config, &r.stats);
    let mut s = format!(
        "N_m {}  d_m {}  d_cult {}  q_cult_succ {}  p_acc {}\nT_m    {}\nT_intv {} (stderr {})\nT_idle {} (stderr {})\nstages {}\n",
        c.n_m, c.d_m, c.d_cult, c.q_cult_succ, c.p_acc, st.t_m, st.t_intv_mean, st.t_intv_stderr, st.t_idle_mean, st.t_idle_stderr, st.stages
    );
    let d = &st.discards;
    let _ = writeln!(
        s,
        "discards: cultivation {}  growth {}  during merge {}  displaced {}",
        d.cultivation_failed, d.growth_rejected, d.during_merge, d.displaced
    );
    notes(&mut s, &r.notes);
    s
}

fn human_fit(r: &FitReport) -> String {
    let mut s = String::new();
    for f in &r.fits {
        let _ = writeln!(s, "{} (rms log10 {}, {} iterations)", f.model, f.rms_log10, f.iterations);
        for (n, v) in f.model.param_names().iter().zip(&f.values) {
            let _ = writeln!(s, "  {n:<8} {v}");
        }
    }
    if let Some(scores) = &r.loocv {
        let _ = writeln!(s, "LOOCV ranking:");
        for l in scores {
            match l.score {
                Some(x) => {
                    let _ = writeln!(s, "  {:<12} {}  ({} of {} folds failed)", l.model.id(), x, l.failed_folds, l.folds);
                }
                None => {
                    let _ = writeln!(s, "  {:<12} disqualified ({} of {} folds failed)", l.model.id(), l.failed_folds, l.folds);
                }
            }
        }
    }
    s
}

fn notes(s: &mut String, notes: &[String]) {
    for n in notes {
        let _ = writeln!(s, "note: {n}");
    }
}
