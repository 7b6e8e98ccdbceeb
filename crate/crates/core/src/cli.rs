//! Command-line surface.
//!
//! Without `--workload`/`--profile` the commands use the built-in reference
//! workload and its generated profile. Human-readable tables go to standard
//! output and the JSON record to `--out`. Exit codes: 0 success, 1 input
//! error, 2 infeasible.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{cloud_only, edge_only};
use crate::costs::{derive_sensor_gamma, Assignment, CostOrientation, ObjectiveMode, Profile};
use crate::error::{Error, Result};
use crate::feasibility::check_assignment;
use crate::io::{parse_workload, profile_from_json, profile_to_json, write_workload};
use crate::model::{validate_workload, Workload};
use crate::reference::{apply_treq_rule, generate_profile, reference_workload, ProfileKnobs};
use crate::report::{
    to_json, CompareReport, InputDigest, OperatorBound, RunManifest, SimRunReport, SolveReport, ValidateReport,
};
use crate::sim::compare::{compare_runs, RunSummary};
use crate::sim::trace::{generate_trace, StreamConfig, Trace};
use crate::sim::{run_sim, SimConfig};
use crate::solver::{solve, Preflights, SolveError, Solution, SolverConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "shm-offload", version, about = "Edge-cloud offload scheduling for SHM stream operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the reference workload file.
    GenWorkload(OutOnly),
    /// Write a synthetic profile for a workload.
    GenProfile(GenProfileArgs),
    /// Write a synthetic sensor trace.
    GenTrace(GenTraceArgs),
    /// Check a workload (and optionally a profile).
    Validate(ValidateArgs),
    /// Search for the minimum-transmission assignment.
    Solve(SolveArgs),
    /// Evaluate the all-cloud or all-edge placement.
    Baseline(BaselineArgs),
    /// Replay a trace under an assignment.
    Simulate(SimulateArgs),
    /// Tabulate reports against the first one.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct OutOnly {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Workload file; the reference workload when omitted.
    #[arg(long)]
    pub workload: Option<PathBuf>,
    /// Profile JSON; generated from the workload when omitted.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Uplink bandwidth in bytes/s applied to every node.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Latency bound slack over the cloud-only latency, for unbounded operators.
    #[arg(long, default_value_t = 0.10)]
    pub treq_slack: f64,
    #[arg(long, value_enum, default_value_t = Orientation::Corrected)]
    pub cost_orientation: Orientation,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Grid step of fractional ratios.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Paper)]
    pub objective_mode: Mode,
    /// Stop each search unit after this many seconds (non-deterministic).
    #[arg(long)]
    pub time_budget: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    Corrected,
    Literal,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Paper,
    Dedup,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Co,
    Eo,
    Solve,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Co => "co",
            Strategy::Eo => "eo",
            Strategy::Solve => "solve",
        }
    }
}

#[derive(Args, Debug)]
pub struct GenProfileArgs {
    #[arg(long)]
    pub workload: Option<PathBuf>,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenTraceArgs {
    #[arg(long)]
    pub workload: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trace length in seconds.
    #[arg(long, default_value_t = 3600.0)]
    pub duration: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub strategy: Strategy,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Assignment JSON, or any solve/baseline report.
    #[arg(long)]
    pub assignment: Option<PathBuf>,
    /// Strategy to compute when no assignment file is given.
    #[arg(long, value_enum, default_value_t = Strategy::Solve)]
    pub strategy: Strategy,
    /// Trace file; generated from `--seed` and `--duration` when omitted.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3600.0)]
    pub duration: f64,
    /// Simulate even if the assignment violates constraints.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Reports; percentages are relative to the first.
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl From<Orientation> for CostOrientation {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Corrected => CostOrientation::Corrected,
            Orientation::Literal => CostOrientation::Literal,
        }
    }
}

impl From<Mode> for ObjectiveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Paper => ObjectiveMode::Paper,
            Mode::Dedup => ObjectiveMode::Dedup,
        }
    }
}

impl SolverArgs {
    fn config(&self, input: &InputArgs) -> SolverConfig {
        SolverConfig {
            delta: self.delta,
            objective_mode: self.objective_mode.into(),
            cost_orientation: input.cost_orientation.into(),
            time_budget_s: self.time_budget,
            preflights: Preflights::default(),
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn source(path: &Path) -> String {
    path.display().to_string()
}

fn knobs(bandwidth: Option<f64>) -> ProfileKnobs {
    let mut k = ProfileKnobs::default();
    if let Some(b) = bandwidth {
        k.bandwidth = b;
    }
    k
}

fn check_bandwidth(b: Option<f64>) -> Result<()> {
    match b {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(Error::Input(format!("--bandwidth must be positive, got {v}"))),
        _ => Ok(()),
    }
}

fn load_workload(path: Option<&Path>, inputs: &mut Vec<InputDigest>) -> Result<Workload> {
    match path {
        Some(p) => {
            let bytes = read_bytes(p)?;
            inputs.push(InputDigest::new("workload", &source(p), &bytes));
            let text = String::from_utf8(bytes).map_err(|_| Error::Input(format!("{}: not UTF-8", p.display())))?;
            parse_workload(&text).map_err(|(line, message)| Error::Parse {
                path: source(p),
                line,
                message,
            })
        }
        None => {
            let w = reference_workload();
            inputs.push(InputDigest::new("workload", "builtin:reference.workload", write_workload(&w).as_bytes()));
            Ok(w)
        }
    }
}

struct Loaded {
    w: Workload,
    p: Profile,
    manifest: RunManifest,
}

/// Reads or builds the inputs, applies `--bandwidth` and fills unbounded
/// latency requirements.
fn load(command: &str, a: &InputArgs) -> Result<Loaded> {
    check_bandwidth(a.bandwidth)?;
    let mut manifest = RunManifest::new(command);
    let mut w = load_workload(a.workload.as_deref(), &mut manifest.inputs)?;
    let structural = validate_workload(&w);
    if !structural.is_valid() {
        let list: Vec<String> = structural.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Input(format!("invalid workload: {}", list.join("; "))));
    }
    let mut p = match &a.profile {
        Some(path) => {
            let bytes = read_bytes(path)?;
            manifest.inputs.push(InputDigest::new("profile", &source(path), &bytes));
            let text = String::from_utf8(bytes).map_err(|_| Error::Input(format!("{}: not UTF-8", path.display())))?;
            profile_from_json(&text)?
        }
        None => {
            let k = knobs(None);
            log::debug!("no profile given, generating one with {k:?}");
            let p = generate_profile(&w, &k);
            manifest.profile_knobs = Some(k);
            p
        }
    };
    if let Some(b) = a.bandwidth {
        log::debug!("bandwidth {b} B/s on all {} links", p.bandwidth.len());
        for v in p.bandwidth.values_mut() {
            *v = b;
        }
    }
    let problems = p.check_complete(&w);
    if !problems.is_empty() {
        return Err(Error::Input(format!("incomplete profile: {}", problems.join("; "))));
    }
    apply_treq_rule(&mut w, &p, a.treq_slack, a.cost_orientation.into())?;
    manifest.treq_slack = Some(a.treq_slack);
    manifest.bandwidth = a.bandwidth;
    Ok(Loaded { w, p, manifest })
}

fn bounds(w: &Workload) -> Vec<OperatorBound> {
    w.operators
        .iter()
        .map(|o| OperatorBound {
            op: o.id,
            t_req_s: o.t_req_s,
        })
        .collect()
}

fn solution_table(strategy: &str, s: &Solution, w: &Workload) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>5} {:>6} {:>14} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "op", "gamma", "bytes", "t_edge_s", "t_trans_s", "t_wait_s", "t_cloud_s", "t_req_s"
    );
    for (r, o) in s.costs.operators.iter().zip(&w.operators) {
        let bytes: f64 = r.data_bytes.values().sum();
        let _ = writeln!(
            out,
            "{:>5} {:>6.2} {:>14.0} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            r.op.to_string(),
            r.gamma,
            bytes,
            r.t_edge_s,
            r.t_trans_s,
            r.t_wait_s,
            r.t_cloud_s,
            o.t_req_s
        );
    }
    let _ = writeln!(
        out,
        "{strategy}: feasible={} objective_bytes={:.0} violations={}",
        s.feasible,
        s.objective_bytes,
        s.violations.len()
    );
    for v in &s.violations {
        let _ = writeln!(out, "  {}: {}", v.constraint, v.detail);
    }
    let st = &s.stats;
    let _ = writeln!(
        out,
        "search: units={} nodes={} leaves={} prunes resource={} bound={} latency={} infeasible_leaves={}",
        st.units, st.nodes_explored, st.leaves, st.prunes_resource, st.prunes_bound, st.prunes_latency, st.leaves_infeasible
    );
    if !s.cross_placement.is_empty() {
        let ids: Vec<String> = s.cross_placement.iter().map(|o| o.to_string()).collect();
        let _ = writeln!(out, "cross-placement composites: {}", ids.join(" "));
    }
    out
}

fn emit(out_path: Option<&Path>, json: &str) -> Result<()> {
    if let Some(p) = out_path {
        write_file(p, json.as_bytes())?;
    }
    Ok(())
}

fn run_strategy(strategy: Strategy, l: &Loaded, cfg: &SolverConfig) -> Result<Solution> {
    let s = match strategy {
        Strategy::Co => cloud_only(&l.w, &l.p, cfg),
        Strategy::Eo => edge_only(&l.w, &l.p, cfg),
        Strategy::Solve => solve(&l.w, &l.p, cfg),
    };
    s.map_err(|e| match e {
        SolveError::BadDelta(_) | SolveError::Cyclic => Error::Input(e.to_string()),
        other => Error::Solve(other),
    })
}

fn cmd_solve(
    strategy: Strategy,
    input: &InputArgs,
    solver: &SolverArgs,
    out_path: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<u8> {
    let command = if strategy == Strategy::Solve { "solve" } else { "baseline" };
    let mut l = load(command, input)?;
    let cfg = solver.config(input);
    let s = run_strategy(strategy, &l, &cfg)?;
    log::info!("{}: feasible={} stats {:?}", strategy.name(), s.feasible, s.stats);
    l.manifest.solver = Some(cfg);
    let text = solution_table(strategy.name(), &s, &l.w);
    let feasible = s.feasible;
    let report = SolveReport {
        manifest: l.manifest,
        strategy: strategy.name().into(),
        t_req_s: bounds(&l.w),
        solution: s,
    };
    emit(out_path, &to_json(&report))?;
    let _ = stdout.write_all(text.as_bytes());
    Ok(if feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn load_assignment(path: &Path, w: &Workload) -> Result<Assignment> {
    let bytes = read_bytes(path)?;
    let v: serde_json::Value = serde_json::from_slice(&bytes)?;
    let inner = v.get("assignment").cloned().unwrap_or(v);
    let a: Assignment = serde_json::from_value(inner)?;
    Ok(derive_sensor_gamma(&a, w)?)
}

fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> Result<u8> {
    let mut l = load("simulate", &a.input)?;
    let orientation: CostOrientation = a.input.cost_orientation.into();
    let assignment = match &a.assignment {
        Some(path) => {
            let bytes = read_bytes(path)?;
            l.manifest.inputs.push(InputDigest::new("assignment", &source(path), &bytes));
            load_assignment(path, &l.w)?
        }
        None => {
            let cfg = a.solver.config(&a.input);
            let s = run_strategy(a.strategy, &l, &cfg)?;
            l.manifest.solver = Some(cfg);
            s.assignment
        }
    };
    let violations = check_assignment(&l.w, &l.p, &assignment, orientation)?;
    if !violations.is_empty() && !a.force {
        for v in &violations {
            let _ = writeln!(stdout, "{}: {}", v.constraint, v.detail);
        }
        let _ = writeln!(stdout, "assignment violates {} constraint(s); pass --force to simulate anyway", violations.len());
        return Ok(EXIT_INFEASIBLE);
    }
    let knobs = l.manifest.profile_knobs.clone().unwrap_or_default();
    let trace = match &a.trace {
        Some(path) => {
            let bytes = read_bytes(path)?;
            l.manifest.inputs.push(InputDigest::new("trace", &source(path), &bytes));
            Trace::from_bytes(&bytes).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?
        }
        None => {
            if !(a.duration > 0.0 && a.duration.is_finite()) {
                return Err(Error::Input(format!("--duration must be positive, got {}", a.duration)));
            }
            let cfg = StreamConfig {
                duration_s: a.duration,
                sample_rate_hz: knobs.sample_rate_hz,
                seed: a.seed,
                ..StreamConfig::default()
            };
            let t = generate_trace(&cfg, l.w.sensors.iter().copied());
            l.manifest.stream = Some(cfg);
            t
        }
    };
    l.manifest.seed = a.seed;
    let cfg = SimConfig {
        cost_orientation: orientation,
        gust_s: knobs.gust_s,
        ..SimConfig::default()
    };
    let r = run_sim(&l.w, &l.p, &assignment, &trace, &cfg).map_err(|e| Error::Input(e.to_string()))?;
    l.manifest.sim = Some(cfg);

    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:>5} {:>6} {:>12} {:>12} {:>12} {:>8} {:>12} {:>12} {:>6}",
        "op", "gamma", "raw_B", "inter_B", "result_B", "outputs", "lat_mean_s", "lat_p95_s", "viol"
    );
    for o in &r.operators {
        let _ = writeln!(
            text,
            "{:>5} {:>6.2} {:>12} {:>12} {:>12} {:>8} {:>12.6} {:>12.6} {:>6}",
            o.op.to_string(),
            o.gamma,
            o.raw.payload_bytes,
            o.intermediate.payload_bytes,
            o.result.payload_bytes,
            o.outputs,
            o.latency_mean_s,
            o.latency_p95_s,
            o.treq_violations
        );
    }
    let _ = writeln!(
        text,
        "horizon {} s: payload_bytes={} frame_bytes={} frames={} makespan_s={:.3}",
        r.horizon_s,
        r.totals.payload_bytes,
        r.totals.frame_bytes,
        r.totals.raw.frames + r.totals.intermediate.frames + r.totals.result.frames,
        r.makespan_s
    );
    for wmsg in &r.warnings {
        let _ = writeln!(text, "warning: {wmsg}");
    }
    let report = SimRunReport { manifest: l.manifest, sim: r };
    emit(a.out.as_deref(), &to_json(&report))?;
    let _ = stdout.write_all(text.as_bytes());
    Ok(EXIT_OK)
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write) -> Result<u8> {
    check_bandwidth(a.input.bandwidth)?;
    let mut manifest = RunManifest::new("validate");
    let w = load_workload(a.input.workload.as_deref(), &mut manifest.inputs)?;
    let structural = validate_workload(&w);
    let mut profile_problems = Vec::new();
    let mut cloud_only_violations = Vec::new();
    if structural.is_valid() {
        let p = match &a.input.profile {
            Some(path) => {
                let bytes = read_bytes(path)?;
                manifest.inputs.push(InputDigest::new("profile", &source(path), &bytes));
                let text = String::from_utf8(bytes).map_err(|_| Error::Input(format!("{}: not UTF-8", path.display())))?;
                profile_from_json(&text)?
            }
            None => {
                let k = knobs(a.input.bandwidth);
                let p = generate_profile(&w, &k);
                manifest.profile_knobs = Some(k);
                p
            }
        };
        profile_problems = p.check_complete(&w);
        if profile_problems.is_empty() {
            let mut w = w.clone();
            apply_treq_rule(&mut w, &p, a.input.treq_slack, a.input.cost_orientation.into())?;
            manifest.treq_slack = Some(a.input.treq_slack);
            cloud_only_violations = check_assignment(&w, &p, &Assignment::uniform(&w, 1.0), a.input.cost_orientation.into())?;
        }
    }
    let valid = structural.is_valid() && profile_problems.is_empty();
    let mut text = String::new();
    for v in &structural.violations {
        let _ = writeln!(text, "structural: {v}");
    }
    for p in &profile_problems {
        let _ = writeln!(text, "profile: {p}");
    }
    for v in &cloud_only_violations {
        let _ = writeln!(text, "cloud-only {}: {}", v.constraint, v.detail);
    }
    let _ = writeln!(
        text,
        "{} operators, {} sensors, {} nodes: {}",
        w.operators.len(),
        w.sensors.len(),
        w.topology.nodes.len(),
        if valid { "valid" } else { "invalid" }
    );
    let report = ValidateReport {
        manifest,
        valid,
        structural: structural.violations,
        profile_problems,
        cloud_only_violations,
    };
    emit(a.out.as_deref(), &to_json(&report))?;
    let _ = stdout.write_all(text.as_bytes());
    Ok(if valid { EXIT_OK } else { EXIT_INPUT })
}

fn cmd_compare(a: &CompareArgs, stdout: &mut dyn Write) -> Result<u8> {
    let mut manifest = RunManifest::new("compare");
    let mut runs = Vec::new();
    for path in &a.reports {
        let bytes = read_bytes(path)?;
        manifest.inputs.push(InputDigest::new("report", &source(path), &bytes));
        let v: serde_json::Value = serde_json::from_slice(&bytes)?;
        let label = path.file_stem().map_or_else(|| source(path), |s| s.to_string_lossy().into_owned());
        runs.push(RunSummary::from_report(&label, &v).map_err(|e| Error::Input(e.to_string()))?);
    }
    let table = compare_runs(&runs);
    let text = table.render();
    emit(a.out.as_deref(), &to_json(&CompareReport { manifest, table }))?;
    let _ = stdout.write_all(text.as_bytes());
    Ok(EXIT_OK)
}

fn write_or_print(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::GenWorkload(a) => {
            write_or_print(a.out.as_deref(), &write_workload(&reference_workload()), stdout)?;
            Ok(EXIT_OK)
        }
        Command::GenProfile(a) => {
            check_bandwidth(a.bandwidth)?;
            let w = load_workload(a.workload.as_deref(), &mut Vec::new())?;
            let p = generate_profile(&w, &knobs(a.bandwidth));
            write_or_print(a.out.as_deref(), &profile_to_json(&p), stdout)?;
            Ok(EXIT_OK)
        }
        Command::GenTrace(a) => {
            if !(a.duration > 0.0 && a.duration.is_finite()) {
                return Err(Error::Input(format!("--duration must be positive, got {}", a.duration)));
            }
            let w = load_workload(a.workload.as_deref(), &mut Vec::new())?;
            let cfg = StreamConfig {
                duration_s: a.duration,
                seed: a.seed,
                ..StreamConfig::default()
            };
            let t = generate_trace(&cfg, w.sensors.iter().copied());
            write_file(&a.out, &t.to_bytes())?;
            let _ = writeln!(stdout, "{} sensors x {} samples -> {}", t.sensors.len(), t.len(), a.out.display());
            Ok(EXIT_OK)
        }
        Command::Validate(a) => cmd_validate(a, stdout),
        Command::Solve(a) => cmd_solve(Strategy::Solve, &a.input, &a.solver, a.out.as_deref(), stdout),
        Command::Baseline(a) => {
            if a.strategy == Strategy::Solve {
                return Err(Error::Input("baseline strategy must be co or eo".into()));
            }
            cmd_solve(a.strategy, &a.input, &a.solver, a.out.as_deref(), stdout)
        }
        Command::Simulate(a) => cmd_simulate(a, stdout),
        Command::Compare(a) => cmd_compare(a, stdout),
    }
}

/// Parses `args` (program name first) and runs the command. Diagnostics
/// go to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
            } else {
                let _ = write!(stdout, "{}", e.render());
            }
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}
