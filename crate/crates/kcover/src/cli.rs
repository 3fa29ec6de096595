//! Subcommand definitions and their execution.
//!
//! Machine-readable results go to files under `--out`; the returned
//! [`Summary`] holds the human-readable lines for standard output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use kcover_core::longevity::BatteryModel;
use kcover_core::netsim::{
    derive_instance, preprocess, random_deployment, run_partition_phase, SimConfig,
};
use kcover_core::{
    evaluate, exact_optimum, generate_instance, upper_bound, Algorithm, CoverageReport,
    OracleBudget, ProblemInstance, UpperBound,
};

use crate::error::{Error, Result};
use crate::experiments::{
    self, FAIRNESS_CONFIG, FAIRNESS_TRIALS, LONGEVITY_AREAS, LONGEVITY_EDGES, LONGEVITY_SEEDS,
    LONGEVITY_SUBSETS, TABLE2_TRIALS,
};
use crate::format::{
    format_deployment, format_instance, format_partition, read_deployment, read_instance,
    read_partition, read_text, write_text,
};
use crate::manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(
    name = "kcover",
    version,
    about = "Partition sensors into k covers for round-robin scheduling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a uniform random instance.
    Generate(GenerateArgs),
    /// Generate a random deployment on the unit square.
    GenerateDeployment(GenerateDeploymentArgs),
    /// Partition an instance with one algorithm.
    Partition(PartitionArgs),
    /// Compute exact optima of a small instance.
    Oracle(OracleArgs),
    /// Run the message-passing protocol on a deployment.
    Netsim(NetsimArgs),
    /// Run one of the experiment studies.
    Experiment(ExperimentArgs),
    /// Re-check a partition (and optionally its report) against an instance.
    Validate(ValidateArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    /// Number of areas |S|.
    #[arg(long)]
    pub areas: usize,
    /// Number of subsets n.
    #[arg(long)]
    pub subsets: usize,
    /// Number of subset-area edges |E|.
    #[arg(long)]
    pub edges: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateDeploymentArgs {
    #[arg(long)]
    pub sensors: usize,
    #[arg(long)]
    pub areas: usize,
    /// Sensing radius shared by every sensor.
    #[arg(long)]
    pub radius: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PartitionArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// random, dgreedy or cgreedy.
    #[arg(long)]
    pub alg: String,
    /// Seed for the randomized algorithm.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the instance's k.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    /// Node ceiling. Replaces the default n <= 12, k <= 4 guard.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct NetsimArgs {
    #[arg(long)]
    pub deployment: PathBuf,
    /// Overrides the deployment file's k.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    Table2,
    Longevity,
    Fairness,
    Coverrange,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub study: Study,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Instances per cell (table2, coverrange), runs (fairness) or seeds
    /// (longevity). Each study has its own default.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Longevity coverage threshold.
    #[arg(long, default_value_t = 0.8)]
    pub threshold: f64,
    /// Battery in activation slots per sensor (longevity).
    #[arg(long, default_value_t = 100)]
    pub battery: u64,
    /// Battery multiplier for round-robin schedules (longevity).
    #[arg(long, default_value_t = 1.0)]
    pub burst_bonus: f64,
    /// Instance for the fairness study; generated from the seed if absent.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ValidateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Report file written next to a partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub k: usize,
    pub bound: UpperBound,
    pub report: CoverageReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFile {
    pub optimum_objective: u64,
    pub optimum_maxmin: u32,
    /// Cover id (1-based) of every subset in an objective-optimal partition.
    pub objective_witness: Vec<u32>,
    pub maxmin_witness: Vec<u32>,
    pub nodes: u64,
    pub bound: UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotJson {
    pub slot: u64,
    pub sensor: usize,
    pub cover: u32,
    pub row_sums: Vec<u32>,
    pub tie: bool,
    pub recipients: Vec<usize>,
    pub undelivered: Vec<usize>,
    pub latest_input_slot: Option<u64>,
}

/// Netsim trace; sensor and cover ids 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub k: usize,
    pub hello_count: usize,
    pub decision_count: usize,
    pub hello_radius: Vec<f64>,
    pub decision_radius: Vec<f64>,
    /// Ordered (sender, neighbor) pairs outside the sender's decision radius.
    pub reachability_violations: Vec<[usize; 2]>,
    pub undelivered_count: usize,
    /// Whether the partition equals the sequential distributed greedy one.
    pub matches_sequential: bool,
    pub slots: Vec<SlotJson>,
}

/// What a command did: lines for standard output and the files it wrote.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub lines: Vec<String>,
    pub outputs: Vec<String>,
}

impl Summary {
    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }
}

fn parse_algorithm(name: &str) -> Result<Algorithm> {
    name.parse()
        .map_err(|_| Error::UnknownAlgorithm(name.to_string()))
}

fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).map_err(|e| Error::io(path, e))
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::GenerateDeployment(_) => "generate-deployment",
            Command::Partition(_) => "partition",
            Command::Oracle(_) => "oracle",
            Command::Netsim(_) => "netsim",
            Command::Experiment(_) => "experiment",
            Command::Validate(_) => "validate",
            Command::Replay(_) => "replay",
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Generate(a) => Some(a.seed),
            Command::GenerateDeployment(a) => Some(a.seed),
            Command::Partition(a) => Some(a.seed),
            Command::Experiment(a) => Some(a.seed),
            _ => None,
        }
    }

    fn out_dir(&mut self) -> Option<&mut PathBuf> {
        match self {
            Command::Generate(a) => Some(&mut a.out),
            Command::GenerateDeployment(a) => Some(&mut a.out),
            Command::Partition(a) => Some(&mut a.out),
            Command::Oracle(a) => Some(&mut a.out),
            Command::Netsim(a) => Some(&mut a.out),
            Command::Experiment(a) => Some(&mut a.out),
            Command::Validate(_) | Command::Replay(_) => None,
        }
    }

    fn inputs(&mut self) -> Vec<&mut PathBuf> {
        match self {
            Command::Partition(a) => vec![&mut a.instance],
            Command::Oracle(a) => vec![&mut a.instance],
            Command::Netsim(a) => vec![&mut a.deployment],
            Command::Experiment(a) => a.instance.iter_mut().collect(),
            Command::Validate(a) => {
                let mut v = vec![&mut a.instance, &mut a.partition];
                v.extend(a.report.iter_mut());
                v
            }
            Command::Replay(a) => vec![&mut a.manifest],
            Command::Generate(_) | Command::GenerateDeployment(_) => Vec::new(),
        }
    }

    /// Makes every path absolute so a manifest replays from any directory.
    fn resolve(mut self) -> Result<Self> {
        for p in self.inputs() {
            *p = absolute(p)?;
        }
        if let Some(out) = self.out_dir() {
            *out = absolute(out)?;
        }
        Ok(self)
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_args<I, S>(args: I) -> std::result::Result<Summary, RunError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv =
        std::iter::once(std::ffi::OsString::from("kcover")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(RunError::Usage)?;
    run(cli.command).map_err(RunError::Run)
}

#[derive(Debug)]
pub enum RunError {
    Usage(clap::Error),
    Run(Error),
}

/// Runs a command and, for commands that write files, its manifest.
pub fn run(command: Command) -> Result<Summary> {
    let mut command = command.resolve()?;
    let start = Instant::now();
    let summary = match &command {
        Command::Generate(a) => cmd_generate(a)?,
        Command::GenerateDeployment(a) => cmd_generate_deployment(a)?,
        Command::Partition(a) => cmd_partition(a)?,
        Command::Oracle(a) => cmd_oracle(a)?,
        Command::Netsim(a) => cmd_netsim(a)?,
        Command::Experiment(a) => cmd_experiment(a)?,
        Command::Validate(a) => return cmd_validate(a),
        Command::Replay(a) => return cmd_replay(a),
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut summary = summary;
    summary.say(format!("wall time {wall_time_ms:.1} ms"));

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: command.name().to_string(),
        seed: command.seed(),
        inputs: command.inputs().into_iter().map(|p| p.clone()).collect(),
        out_dir: command.out_dir().expect("file-writing command").clone(),
        outputs: summary.outputs.clone(),
        wall_time_ms,
        command,
    };
    manifest.save(&manifest.out_dir)?;
    Ok(summary)
}

fn prepare_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn emit(summary: &mut Summary, dir: &Path, name: &str, contents: &str) -> Result<()> {
    write_text(&dir.join(name), contents)?;
    summary.outputs.push(name.to_string());
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<Summary> {
    let instance = generate_instance(a.areas, a.subsets, a.edges, a.k, a.seed)?;
    prepare_out(&a.out)?;
    let mut s = Summary::default();
    emit(&mut s, &a.out, "instance.txt", &format_instance(&instance))?;
    s.say(format!(
        "generated |S| = {}, n = {}, |E| = {}, k = {} (seed {})",
        a.areas, a.subsets, a.edges, a.k, a.seed
    ));
    Ok(s)
}

fn cmd_generate_deployment(a: &GenerateDeploymentArgs) -> Result<Summary> {
    if !(a.radius.is_finite() && a.radius >= 0.0) {
        return Err(Error::Input(format!(
            "radius must be finite and non-negative, got {}",
            a.radius
        )));
    }
    if a.k < 2 {
        return Err(Error::Input(format!("k must be at least 2, got {}", a.k)));
    }
    let deployment = random_deployment(a.sensors, a.areas, a.radius, a.seed)?;
    prepare_out(&a.out)?;
    let mut s = Summary::default();
    emit(
        &mut s,
        &a.out,
        "deployment.txt",
        &format_deployment(&deployment, a.k),
    )?;
    s.say(format!(
        "generated {} sensors, {} areas, radius {} (seed {})",
        a.sensors, a.areas, a.radius, a.seed
    ));
    Ok(s)
}

fn load_instance(path: &Path, k: Option<usize>) -> Result<ProblemInstance> {
    let instance = read_instance(path)?;
    Ok(match k {
        Some(k) => instance.with_k(k)?,
        None => instance,
    })
}

fn cmd_partition(a: &PartitionArgs) -> Result<Summary> {
    let alg = parse_algorithm(&a.alg)?;
    let instance = load_instance(&a.instance, a.k)?;
    let outcome = alg.run(&instance, a.seed);
    let report = evaluate(&instance, &outcome.partition)?;
    report.check_invariants(&instance)?;
    let bound = upper_bound(&instance);

    let file = ReportFile {
        algorithm: alg.name().to_string(),
        seed: (!alg.is_deterministic()).then_some(a.seed),
        k: instance.k(),
        bound,
        report,
    };
    prepare_out(&a.out)?;
    let mut s = Summary::default();
    emit(
        &mut s,
        &a.out,
        "partition.txt",
        &format_partition(&outcome.partition),
    )?;
    emit(&mut s, &a.out, "report.json", &to_json(&file)?)?;
    emit(&mut s, &a.out, "trace.json", &to_json(&outcome.trace)?)?;
    s.say(format!(
        "{}: objective {} of bound {} ({:.4}), size range {:.4}",
        alg,
        file.report.objective,
        bound.value,
        file.report.objective as f64 / bound.value.max(1) as f64,
        file.report.size_range_ratio
    ));
    Ok(s)
}

fn cmd_oracle(a: &OracleArgs) -> Result<Summary> {
    let instance = load_instance(&a.instance, a.k)?;
    let budget = a
        .budget
        .map_or_else(OracleBudget::default, OracleBudget::nodes);
    let r = exact_optimum(&instance, &budget)?;
    let to_ids = |p: &kcover_core::Partition| p.assignment().iter().map(|c| c + 1).collect();
    let file = OracleFile {
        optimum_objective: r.optimum_objective,
        optimum_maxmin: r.optimum_maxmin,
        objective_witness: to_ids(&r.objective_witness),
        maxmin_witness: to_ids(&r.maxmin_witness),
        nodes: r.nodes,
        bound: upper_bound(&instance),
    };
    prepare_out(&a.out)?;
    let mut s = Summary::default();
    emit(&mut s, &a.out, "oracle.json", &to_json(&file)?)?;
    s.say(format!(
        "OPT = {}, l* = {} ({} nodes)",
        r.optimum_objective, r.optimum_maxmin, r.nodes
    ));
    Ok(s)
}

fn cmd_netsim(a: &NetsimArgs) -> Result<Summary> {
    let (deployment, file_k) = read_deployment(&a.deployment)?;
    let k = a.k.unwrap_or(file_k);
    let pre = preprocess(&deployment);
    let sim = run_partition_phase(&pre, &SimConfig::new(k))?;
    let sequential = kcover_core::distributed_greedy_partition(&derive_instance(&deployment, k)?);
    let violations = pre.reachability_violations();

    let n = deployment.sensors().len();
    let trace = TraceFile {
        k,
        hello_count: sim.hello_count,
        decision_count: sim.decision_count,
        hello_radius: (0..n).map(|j| pre.hello_radius_sq(j).sqrt()).collect(),
        decision_radius: (0..n).map(|j| pre.broadcast_radius_sq(j).sqrt()).collect(),
        reachability_violations: violations.iter().map(|&(j, o)| [j + 1, o + 1]).collect(),
        undelivered_count: sim.undelivered_count(),
        matches_sequential: sim.outcome.partition == sequential.partition,
        slots: sim
            .slots
            .iter()
            .map(|r| SlotJson {
                slot: r.slot,
                sensor: r.sensor + 1,
                cover: r.cover + 1,
                row_sums: r.row_sums.clone(),
                tie: r.tie,
                recipients: one_based(&r.recipients),
                undelivered: one_based(&r.undelivered),
                latest_input_slot: r.latest_input_slot,
            })
            .collect(),
    };
    prepare_out(&a.out)?;
    let mut s = Summary::default();
    emit(
        &mut s,
        &a.out,
        "partition.txt",
        &format_partition(&sim.outcome.partition),
    )?;
    emit(&mut s, &a.out, "trace.json", &to_json(&trace)?)?;
    s.say(format!(
        "{} sensors, k = {}: {} HELLO + {} DECISION messages",
        n, k, sim.hello_count, sim.decision_count
    ));
    s.say(format!(
        "reachability violations: {}, undelivered decisions: {}, matches sequential greedy: {}",
        violations.len(),
        trace.undelivered_count,
        trace.matches_sequential
    ));
    Ok(s)
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<Summary> {
    prepare_out(&a.out)?;
    let mut s = Summary::default();
    let mut csv = Vec::new();
    let name = match a.study {
        Study::Table2 => {
            let rows = experiments::table2_sweep(a.trials.unwrap_or(TABLE2_TRIALS), a.seed)?;
            experiments::write_sweep_csv(&rows, &mut csv)?;
            for r in &rows {
                s.say(format!(
                    "n = {:>4}, |E| = {:>5}: bound {:>5}  random {:>8.1}  dgreedy {:>8.1}  cgreedy {:>8.1}  ({:.1} ms)",
                    r.num_subsets,
                    r.num_edges,
                    r.bound,
                    r.objective[0],
                    r.objective[1],
                    r.objective[2],
                    r.wall_time.as_secs_f64() * 1e3
                ));
            }
            "table2.csv"
        }
        Study::Longevity => {
            let model = BatteryModel {
                battery: a.battery,
                threshold: a.threshold,
                burst_bonus: a.burst_bonus,
            };
            let rows = experiments::longevity_study(
                LONGEVITY_AREAS,
                LONGEVITY_SUBSETS,
                &LONGEVITY_EDGES,
                a.trials.unwrap_or(LONGEVITY_SEEDS),
                a.seed,
                &model,
            )?;
            experiments::write_longevity_csv(&rows, &mut csv)?;
            for edges in LONGEVITY_EDGES {
                for alg in Algorithm::ALL {
                    let ks: Vec<usize> = rows
                        .iter()
                        .filter(|r| r.num_edges == edges && r.algorithm == alg)
                        .map(|r| r.result.achieved_k)
                        .collect();
                    let mean = ks.iter().sum::<usize>() as f64 / ks.len().max(1) as f64;
                    s.say(format!(
                        "|E| = {edges:>5} {alg:>8}: mean achieved k {mean:.2}"
                    ));
                }
            }
            "longevity.csv"
        }
        Study::Fairness => {
            let instance = match &a.instance {
                Some(path) => read_instance(path)?,
                None => {
                    let (k, areas, subsets, edges) = FAIRNESS_CONFIG;
                    generate_instance(areas, subsets, edges, k, a.seed)?
                }
            };
            let curves = experiments::fairness_study(
                &instance,
                a.trials.unwrap_or(FAIRNESS_TRIALS),
                a.seed,
            )?;
            experiments::write_fairness_csv(&curves, &mut csv)?;
            for c in &curves {
                s.say(format!(
                    "{:>8} ({} runs): min ratio {:.4}, mean ratio {:.4}",
                    c.algorithm, c.runs, c.min_ratio, c.mean_ratio
                ));
            }
            "fairness.csv"
        }
        Study::Coverrange => {
            let rows = experiments::cover_range_study(
                &experiments::cover_range_grid(),
                a.trials.unwrap_or(TABLE2_TRIALS),
                a.seed,
            )?;
            experiments::write_cover_range_csv(&rows, &mut csv)?;
            for r in &rows {
                s.say(format!(
                    "|E| = {:>5}, k = {:>2}: mean size range random {:.3} dgreedy {:.3} cgreedy {:.3}",
                    r.num_edges, r.k, r.mean[0], r.mean[1], r.mean[2]
                ));
            }
            "coverrange.csv"
        }
    };
    let text = String::from_utf8(csv).expect("csv output is utf-8");
    emit(&mut s, &a.out, name, &text)?;
    Ok(s)
}

fn cmd_validate(a: &ValidateArgs) -> Result<Summary> {
    let instance = read_instance(&a.instance)?;
    let partition = read_partition(&a.partition)?;
    if partition.k() != instance.k() {
        return Err(Error::Validation(format!(
            "partition has k = {}, instance has k = {}",
            partition.k(),
            instance.k()
        )));
    }
    let report = evaluate(&instance, &partition).map_err(|e| Error::Validation(e.to_string()))?;
    report.check_invariants(&instance)?;
    let mut s = Summary::default();
    if let Some(path) = &a.report {
        let text = read_text(path)?;
        let file: ReportFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })?;
        file.report.check_invariants(&instance)?;
        if file.report != report {
            return Err(Error::Validation(
                "report does not match the partition".into(),
            ));
        }
        if file.bound != upper_bound(&instance) {
            return Err(Error::Validation(
                "report bound does not match the instance".into(),
            ));
        }
    }
    s.say(format!("ok: objective {}", report.objective));
    Ok(s)
}

fn cmd_replay(a: &ReplayArgs) -> Result<Summary> {
    let manifest = RunManifest::load(&a.manifest)?;
    let mut command = manifest.command;
    match command.out_dir() {
        Some(out) => *out = a.out.clone(),
        None => {
            return Err(Error::Input(format!(
                "{} writes no files to replay",
                command.name()
            )))
        }
    }
    let mut s = run(command)?;
    s.say(format!(
        "replayed {} into {}",
        manifest.subcommand,
        a.out.display()
    ));
    Ok(s)
}

/// Compares the files a manifest lists in its own directory and in `other`.
pub fn outputs_identical(manifest_path: &Path, other: &Path) -> Result<bool> {
    let manifest = RunManifest::load(manifest_path)?;
    for name in &manifest.outputs {
        let a = std::fs::read(manifest.out_dir.join(name))
            .map_err(|e| Error::io(manifest.out_dir.join(name), e))?;
        let b = std::fs::read(other.join(name)).map_err(|e| Error::io(other.join(name), e))?;
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}
