//! Command-line front end.
//!
//! Exit codes: 0 success or stable, 1 tool failure, 2 when the analysis
//! answer is negative (unstable network, no admissible cut, no feasible
//! bisection, unsafe removal, simulation not converged), 64 usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use metacut_core::dynamics::{
    equilibrium, integrate_around, perturbed_state, IntegrateOptions, PatchModel, RosenzweigParams,
};
use metacut_core::exhaustive::{Objective, PartitionConfig};
use metacut_core::generate::{generate_er, ErConfig};
use metacut_core::heuristic::spectral_bisect;
use metacut_core::spectral::algebraic_connectivity;
use metacut_core::stability::{safe_rank_r_removal, tau as derive_tau};
use metacut_core::{Jacobian2, LocalDynamics, WeightedGraph};

use crate::document::{parse_network, DocError, Network, NetworkDocument};
use crate::dot::emit_dot;
use crate::parallel::{exhaustive_partition_par, multi_restart_bisect_par, pool};
use crate::report::{
    cut_of, AnalyzeReport, BisectReport, DirectCheck, EdgeCheckReport, EdgeRef, ExhaustiveReport, MerrisJson,
    PartitionJson, SpectralBaseline, TauInfo, TauSource, RemovalCheck,
};
use crate::trajectory::write_trajectory_csv;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "metacut",
    version,
    about = "Stability-preserving partitioning of diffusion-coupled patch networks"
)]
pub struct Cli {
    /// Worker threads for `exhaustive` and `bisect` [default: all cores]
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral summary, bounds and both stability conditions
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
        /// Write the graph as DOT
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Enumerate every cut and keep the ones leaving stable components
    Exhaustive {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "min_weight")]
        objective: ObjectiveArg,
        #[arg(long)]
        json: bool,
        /// Largest cut-space rank to enumerate
        #[arg(long, default_value_t = metacut_core::cutspace::DEFAULT_RANK_CAP)]
        rank_cap: usize,
        /// Smallest component a cut may leave
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        /// Write the best partition as DOT
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Multi-restart gain-driven bisection
    Bisect {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also report a baseline bisection
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[arg(long)]
        json: bool,
        /// Write the best bisection as DOT
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Whether deleting edges keeps lambda_2 above tau
    EdgeCheck {
        #[command(flatten)]
        input: Input,
        /// Comma-separated edges, as `u-v` node pairs or `eK` labels
        #[arg(long, required = true)]
        edges: String,
        #[arg(long)]
        json: bool,
    },
    /// Integrate the coupled system from a perturbed equilibrium
    Simulate {
        #[command(flatten)]
        input: Input,
        /// Time horizon
        #[arg(long = "t", default_value_t = 50.0, value_parser = positive_f64)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3, value_parser = positive_f64)]
        dt: f64,
        /// Perturbation amplitude
        #[arg(long, default_value_t = 1e-3, value_parser = finite_f64)]
        perturb: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Deviation counted as converged [default: perturb / 10]
        #[arg(long, value_parser = finite_f64)]
        tol: Option<f64>,
        /// Record every STRIDE-th step
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        stride: u32,
        /// Keep the synchronous mode (on by default only for identical linear patches)
        #[arg(long)]
        no_project: bool,
        /// Trajectory CSV
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Emit a random network document
    Generate {
        /// Node count and edge probability, `n,p`
        #[arg(long, value_name = "N,P")]
        er: String,
        /// Weight range `wmin,wmax`, with `,int` for whole numbers
        #[arg(long, default_value = "1,20,int")]
        weights: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_disconnected: bool,
        /// Uniform linear patch dynamics to embed, `a,b,c,d`
        #[arg(long, value_parser = parse_jacobian, allow_hyphen_values = true)]
        jacobian: Option<Jacobian2>,
        #[arg(long, value_parser = finite_f64)]
        tau: Option<f64>,
        /// Edge-list output instead of JSON
        #[arg(long)]
        edge_list: bool,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// JSON network document or edge list
    pub file: PathBuf,
    /// Uniform linear patch dynamics, row-major Jacobian `a,b,c,d`
    #[arg(long, value_parser = parse_jacobian, allow_hyphen_values = true, conflicts_with = "rosenzweig")]
    pub jacobian: Option<Jacobian2>,
    /// Uniform Rosenzweig-MacArthur patches, `r,k,a,h,e,m`
    #[arg(long, value_parser = parse_rosenzweig)]
    pub rosenzweig: Option<RosenzweigParams>,
    /// Stability threshold, overriding the document and the dynamics
    #[arg(long, value_parser = finite_f64, allow_hyphen_values = true)]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    #[value(name = "min_weight")]
    MinWeight,
    #[value(name = "max_weight")]
    MaxWeight,
    #[value(name = "max_min_fiedler")]
    MaxMinFiedler,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::MinWeight => Objective::MinWeight,
            ObjectiveArg::MaxWeight => Objective::MaxWeight,
            ObjectiveArg::MaxMinFiedler => Objective::MaxMinFiedler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Spectral,
}

fn finite_f64(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    finite_f64(s).and_then(|v| {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(format!("`{s}` must be positive"))
        }
    })
}

fn numbers(s: &str, count: usize) -> Result<Vec<f64>, String> {
    let vals = s.split(',').map(finite_f64).collect::<Result<Vec<_>, _>>()?;
    if vals.len() != count {
        return Err(format!("expected {count} comma-separated numbers, got {}", vals.len()));
    }
    Ok(vals)
}

fn parse_jacobian(s: &str) -> Result<Jacobian2, String> {
    let v = numbers(s, 4)?;
    Ok(Jacobian2::new(v[0], v[1], v[2], v[3]))
}

fn parse_rosenzweig(s: &str) -> Result<RosenzweigParams, String> {
    let v = numbers(s, 6)?;
    let p = RosenzweigParams {
        r: v[0],
        k: v[1],
        a: v[2],
        h: v[3],
        e: v[4],
        m: v[5],
    };
    PatchModel::rosenzweig(p).map_err(|e| e.to_string())?;
    Ok(p)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Document { path: PathBuf, source: DocError },
    #[error(transparent)]
    Core(#[from] metacut_core::Error),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type CliResult<T> = Result<T, CliError>;

/// Whether the command's answer was positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Positive
        } else {
            Self::Negative
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out) {
        Ok(Outcome::Positive) => EXIT_OK,
        Ok(Outcome::Negative) => EXIT_NEGATIVE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<Outcome> {
    let threads = cli.threads.map(usize::from);
    match cli.command {
        Command::Analyze { input, json, dot } => analyze(&input, json, dot.as_deref(), out),
        Command::Exhaustive {
            input,
            objective,
            json,
            rank_cap,
            min_size,
            dot,
        } => {
            let config = PartitionConfig {
                tau: None,
                rank_cap,
                min_component_size: min_size,
            };
            exhaustive(&input, objective.into(), config, json, dot.as_deref(), threads, out)
        }
        Command::Bisect {
            input,
            trials,
            seed,
            baseline,
            json,
            dot,
        } => bisect(
            &input,
            trials,
            seed,
            baseline.is_some(),
            json,
            dot.as_deref(),
            threads,
            out,
        ),
        Command::EdgeCheck { input, edges, json } => edge_check(&input, &edges, json, out),
        Command::Simulate {
            input,
            horizon,
            dt,
            perturb,
            seed,
            tol,
            stride,
            no_project,
            out: csv_path,
        } => {
            let sim = SimArgs {
                horizon,
                dt,
                perturb,
                seed,
                tol: tol.unwrap_or(perturb.abs() / 10.0),
                stride: stride as usize,
                no_project,
            };
            simulate(&input, &sim, csv_path.as_deref(), out)
        }
        Command::Generate {
            er,
            weights,
            seed,
            allow_disconnected,
            jacobian,
            tau,
            edge_list,
        } => generate(&er, &weights, seed, allow_disconnected, jacobian, tau, edge_list, out),
    }
}

/// Shortest readable form: at most ten decimals, trailing zeros dropped.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn ids(nodes: &[usize]) -> String {
    let parts: Vec<String> = nodes.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ok_fail(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}

struct Loaded {
    network: Network,
    models: Option<Vec<PatchModel>>,
}

impl Loaded {
    fn graph(&self) -> &WeightedGraph {
        &self.network.graph
    }

    fn dynamics(&self) -> CliResult<LocalDynamics> {
        match &self.models {
            Some(m) => Ok(metacut_core::dynamics::local_dynamics(m)?),
            None => Err(CliError::Input(
                "no patch dynamics: add `dynamics` to the document or pass --jacobian / --rosenzweig".into(),
            )),
        }
    }

    /// Flag, then document, then the patches.
    fn tau(&self, flag: Option<f64>) -> CliResult<TauInfo> {
        if let Some(value) = flag {
            return Ok(TauInfo {
                value,
                source: TauSource::Flag,
                patch: None,
            });
        }
        if let Some(value) = self.network.tau {
            return Ok(TauInfo {
                value,
                source: TauSource::Document,
                patch: None,
            });
        }
        match &self.models {
            Some(_) => {
                let t = derive_tau(&self.dynamics()?)?;
                Ok(TauInfo {
                    value: t.tau,
                    source: TauSource::Dynamics,
                    patch: Some(t.argmax_patch),
                })
            }
            None => Err(CliError::Input(
                "no threshold: pass --tau, set `tau` in the document, or supply dynamics".into(),
            )),
        }
    }
}

fn load(input: &Input) -> CliResult<Loaded> {
    let text = std::fs::read_to_string(&input.file).map_err(|source| CliError::Read {
        path: input.file.clone(),
        source,
    })?;
    let network = parse_network(&text).map_err(|source| CliError::Document {
        path: input.file.clone(),
        source,
    })?;
    let n = network.graph.node_count();
    let flag_model = match (input.jacobian, input.rosenzweig) {
        (Some(j), _) => Some(PatchModel::linear(j)),
        (None, Some(p)) => Some(PatchModel::rosenzweig(p)?),
        (None, None) => None,
    };
    let models = match flag_model {
        Some(m) => Some(vec![m; n]),
        None => network.models.clone(),
    };
    Ok(Loaded { network, models })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn emit_json<T: serde::Serialize>(value: &T, out: &mut dyn Write) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("reports always serialize");
    writeln!(out, "{text}")?;
    Ok(())
}

fn tau_line(t: &TauInfo) -> String {
    match (t.source, t.patch) {
        (TauSource::Flag, _) => format!("{} (--tau)", num(t.value)),
        (TauSource::Document, _) => format!("{} (document)", num(t.value)),
        (TauSource::Dynamics, Some(p)) => format!("{} (max tr J / 2, patch {p})", num(t.value)),
        (TauSource::Dynamics, None) => format!("{} (max tr J / 2)", num(t.value)),
    }
}

fn analyze(input: &Input, json: bool, dot: Option<&Path>, out: &mut dyn Write) -> CliResult<Outcome> {
    let loaded = load(input)?;
    let g = loaded.graph();
    let report = AnalyzeReport::build(g, &loaded.dynamics()?, loaded.tau(input.tau)?)?;
    if let Some(p) = dot {
        write_file(p, &emit_dot(g, None))?;
    }
    if json {
        emit_json(&report, out)?;
        return Ok(Outcome::from_bool(report.stable));
    }
    let mut s = String::new();
    writeln!(s, "nodes: {}", report.n).unwrap();
    writeln!(s, "edges: {}", report.m).unwrap();
    writeln!(s, "connected: {}", yes_no(report.connected)).unwrap();
    writeln!(s, "lambda2: {}", num(report.lambda2)).unwrap();
    writeln!(s, "tau: {}", tau_line(&report.tau)).unwrap();
    let failing = if report.failing_patches.is_empty() {
        String::new()
    } else {
        format!(" (patches {})", ids(&report.failing_patches))
    };
    writeln!(
        s,
        "condition 1, (tr J)^2 <= 4 det J: {}{failing}",
        ok_fail(report.condition1_ok)
    )
    .unwrap();
    let marginal = if report.marginal { " (marginal)" } else { "" };
    writeln!(
        s,
        "condition 2, lambda2 >= tau: {}{marginal}",
        ok_fail(report.condition2_ok)
    )
    .unwrap();
    if let Some(b) = &report.bounds {
        for (kind, list) in [("lower", &b.lower), ("upper", &b.upper)] {
            for bound in list.iter() {
                let note = if bound.applicable { "" } else { " (not applicable)" };
                writeln!(s, "{kind} bound {}: {}{note}", bound.name, num(bound.value)).unwrap();
            }
        }
        let exact = if b.unweighted_exact {
            ""
        } else {
            ", lower bounds advisory for weighted graphs"
        };
        writeln!(s, "bound screen: {}{exact}", b.screen).unwrap();
    }
    if let Some(a) = &report.average_weight {
        writeln!(
            s,
            "mean degree: {} against (n-1)/n tau = {}: {}",
            num(a.mean_degree),
            num(a.required),
            ok_fail(a.ok)
        )
        .unwrap();
    }
    writeln!(s, "verdict: {}", if report.stable { "stable" } else { "unstable" }).unwrap();
    out.write_all(s.as_bytes())?;
    Ok(Outcome::from_bool(report.stable))
}

fn partition_line(rank: usize, p: &PartitionJson) -> String {
    let labels: Vec<&str> = p.edges.iter().map(|e| e.label.as_str()).collect();
    let comps: Vec<String> = p
        .components
        .iter()
        .map(|c| format!("{} lambda2 {}", ids(&c.nodes), num(c.lambda2)))
        .collect();
    format!(
        "{rank}. {{{}}} weight {}: {}",
        labels.join(","),
        num(p.cut_weight),
        comps.join("; ")
    )
}

fn exhaustive(
    input: &Input,
    objective: Objective,
    mut config: PartitionConfig,
    json: bool,
    dot: Option<&Path>,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<Outcome> {
    let loaded = load(input)?;
    let g = loaded.graph();
    let dynamics = loaded.dynamics()?;
    let t = loaded.tau(input.tau)?;
    if t.source != TauSource::Dynamics {
        config.tau = Some(t.value);
    }
    let res = pool(threads)?.install(|| exhaustive_partition_par(g, &dynamics, &config))?;
    let report = ExhaustiveReport::new(g, &res, objective, config.tau);
    if let (Some(p), Some(best)) = (dot, report.partitions.first()) {
        let ids: Vec<usize> = best.edges.iter().map(|e| e.id).collect();
        write_file(p, &emit_dot(g, Some(&cut_of(g, &ids))))?;
    }
    let found = report.admissible > 0;
    if json {
        emit_json(&report, out)?;
        return Ok(Outcome::from_bool(found));
    }
    let mut s = String::new();
    writeln!(s, "enumerated: {}", report.enumerated).unwrap();
    writeln!(s, "survivors: {}", report.survivors).unwrap();
    writeln!(s, "admissible: {}", report.admissible).unwrap();
    let tau_note = match config.tau {
        Some(v) => num(v),
        None => "per component".into(),
    };
    writeln!(s, "tau: {tau_note}").unwrap();
    writeln!(s, "objective: {}", report.objective).unwrap();
    for (i, p) in report.partitions.iter().enumerate() {
        writeln!(s, "{}", partition_line(i + 1, p)).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(Outcome::from_bool(found))
}

#[allow(clippy::too_many_arguments)]
fn bisect(
    input: &Input,
    trials: usize,
    seed: u64,
    baseline: bool,
    json: bool,
    dot: Option<&Path>,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<Outcome> {
    let loaded = load(input)?;
    let g = loaded.graph();
    let dynamics = loaded.dynamics()?;
    let t = loaded.tau(input.tau)?;
    let res = pool(threads)?.install(|| multi_restart_bisect_par(g, &dynamics, t.value, trials, seed))?;
    let base = if baseline {
        Some(SpectralBaseline::new(g, &spectral_bisect(g)?)?)
    } else {
        None
    };
    let report = BisectReport::new(g, &res, seed, base);
    if let (Some(p), Some(best)) = (dot, &report.best) {
        let ids: Vec<usize> = best.partition.edges.iter().map(|e| e.id).collect();
        write_file(p, &emit_dot(g, Some(&cut_of(g, &ids))))?;
    }
    let found = report.best.is_some();
    if json {
        emit_json(&report, out)?;
        return Ok(Outcome::from_bool(found));
    }
    let mut s = String::new();
    writeln!(s, "tau: {}", tau_line(&t)).unwrap();
    writeln!(
        s,
        "trials: {} (feasible {}, seed {seed})",
        report.trials, report.feasible_trials
    )
    .unwrap();
    match &report.best {
        Some(b) => {
            writeln!(s, "best: trial {} k {} theta {}", b.trial, b.k, num(b.theta)).unwrap();
            writeln!(s, "C1: {}", ids(&b.c1)).unwrap();
            writeln!(s, "C2: {}", ids(&b.c2)).unwrap();
            writeln!(s, "{}", partition_line(1, &b.partition)).unwrap();
        }
        None => writeln!(s, "best: none (no prefix keeps both sides at or above tau)").unwrap(),
    }
    if let Some(b) = &report.baseline {
        writeln!(
            s,
            "spectral: theta {} (C1 lambda2 {}, C2 lambda2 {}) weight {}",
            num(b.theta),
            num(b.lambda2_c1),
            num(b.lambda2_c2),
            num(b.cut_weight)
        )
        .unwrap();
        writeln!(s, "spectral C1: {}", ids(&b.c1)).unwrap();
        writeln!(s, "spectral C2: {}", ids(&b.c2)).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(Outcome::from_bool(found))
}

/// `u-v` pairs or `eK` labels.
fn parse_edge_request(g: &WeightedGraph, spec: &str) -> CliResult<Vec<(usize, usize)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let bad = || CliError::Input(format!("bad edge `{tok}`: expected `u-v` or `eK`"));
            if let Some(k) = tok.strip_prefix('e') {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 || k > g.edge_count() {
                    return Err(CliError::Input(format!(
                        "no edge `{tok}` (edges are e1..e{})",
                        g.edge_count()
                    )));
                }
                let e = g.edge(k - 1);
                return Ok((e.u, e.v));
            }
            let (a, b) = tok.split_once('-').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect::<CliResult<Vec<_>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(CliError::Input("--edges lists no edges".into()))
            } else {
                Ok(v)
            }
        })
}

fn edge_check(input: &Input, spec: &str, json: bool, out: &mut dyn Write) -> CliResult<Outcome> {
    let loaded = load(input)?;
    let g = loaded.graph();
    let t = loaded.tau(input.tau)?;
    let pairs = parse_edge_request(g, spec)?;
    let verdict = safe_rank_r_removal(g, &pairs, t.value)?;
    let removed_ids: Vec<usize> = pairs
        .iter()
        .map(|&(u, v)| g.find_edge(u, v).expect("checked by the removal test"))
        .collect();
    let after = algebraic_connectivity(&g.without_edges(&removed_ids))?;
    let tol = metacut_core::stability::MARGINAL_TOL * t.value.abs().max(1.0);
    let merris = if g.node_count() >= 2 && g.is_connected() {
        Some(MerrisJson::build(g)?)
    } else {
        None
    };
    let report = EdgeCheckReport {
        tau: t.value,
        lambda2: algebraic_connectivity(g)?,
        removed: removed_ids.iter().map(|&id| EdgeRef::new(g, id)).collect(),
        eigenvector_test: RemovalCheck::from(&verdict),
        direct: DirectCheck {
            lambda2_after: after,
            stable: after >= t.value - tol,
        },
        merris,
    };
    let safe = match report.eigenvector_test.verdict {
        "safe" => true,
        "unsafe" => false,
        _ => report.direct.stable,
    };
    if json {
        emit_json(&report, out)?;
        return Ok(Outcome::from_bool(safe));
    }
    let mut s = String::new();
    writeln!(s, "tau: {}", tau_line(&t)).unwrap();
    writeln!(s, "lambda2: {}", num(report.lambda2)).unwrap();
    let removed: Vec<String> = report
        .removed
        .iter()
        .map(|e| format!("{} ({}-{}, w {})", e.label, e.u, e.v, num(e.w)))
        .collect();
    writeln!(s, "removing: {}", removed.join(", ")).unwrap();
    let th = &report.eigenvector_test;
    match &th.reason {
        Some(r) => writeln!(s, "eigenvector test: not applicable, {r}").unwrap(),
        None => {
            let updated: Vec<String> = th.updated.iter().map(|&v| num(v)).collect();
            writeln!(s, "eigenvector test: {}", th.verdict).unwrap();
            writeln!(s, "updated eigenvalues: {}", updated.join(" ")).unwrap();
            if let Some(u) = th.untouched_min {
                writeln!(s, "smallest untouched eigenvalue: {}", num(u)).unwrap();
            }
        }
    }
    writeln!(
        s,
        "lambda2 after removal: {} ({})",
        num(report.direct.lambda2_after),
        if report.direct.stable { "stable" } else { "unstable" }
    )
    .unwrap();
    if let Some(m) = &report.merris {
        let list = |edges: &mut dyn Iterator<Item = String>| {
            let v: Vec<String> = edges.collect();
            if v.is_empty() {
                "none".to_string()
            } else {
                v.join(", ")
            }
        };
        let ep = list(
            &mut m
                .edge_principle
                .iter()
                .map(|c| format!("{}{}", c.edge.label, if c.verified { "" } else { " (unverified)" })),
        );
        writeln!(s, "fiedler value: {}", num(m.lambda)).unwrap();
        writeln!(s, "edge principle candidates: {ep}").unwrap();
        let alt = list(&mut m.alternating.edges.iter().map(|e| e.label.clone()));
        let new_lambda = m.alternating.new_lambda.map_or("mixed weights".into(), num);
        writeln!(
            s,
            "alternating principle: {alt} -> {new_lambda} (verified {})",
            yes_no(m.alternating.verified)
        )
        .unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(Outcome::from_bool(safe))
}

struct SimArgs {
    horizon: f64,
    dt: f64,
    perturb: f64,
    seed: u64,
    tol: f64,
    stride: usize,
    no_project: bool,
}

fn simulate(input: &Input, a: &SimArgs, csv_path: Option<&Path>, out: &mut dyn Write) -> CliResult<Outcome> {
    let loaded = load(input)?;
    let g = loaded.graph();
    let models = loaded
        .models
        .clone()
        .ok_or_else(|| CliError::Input("simulate needs patch dynamics".into()))?;
    let eq = equilibrium(g, &models)?;
    let identical_linear =
        matches!(models.first(), Some(PatchModel::Linear { .. })) && models.iter().all(|m| *m == models[0]);
    // with one node the synchronous mode is the whole system
    let project = identical_linear && models.len() >= 2 && !a.no_project;
    let x0 = perturbed_state(&eq.state, a.perturb, a.seed, project);
    let opts = IntegrateOptions {
        stride: a.stride,
        project_synchronous: project,
        ..IntegrateOptions::new(a.dt, a.horizon)
    };
    let traj = integrate_around(g, &models, &x0, &eq.state, &opts)?;
    if let Some(p) = csv_path {
        let f = std::fs::File::create(p).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        })?;
        write_trajectory_csv(&traj, std::io::BufWriter::new(f))?;
    }
    let final_dev = traj.final_deviation();
    let peak = traj.max_deviation.iter().copied().fold(0.0, f64::max);
    let converged = !traj.diverged && final_dev <= a.tol;
    let mut s = String::new();
    writeln!(
        s,
        "equilibrium: {}",
        if eq.approximate { "approximate" } else { "exact" }
    )
    .unwrap();
    writeln!(s, "steps: {} (dt {})", opts.steps, num(a.dt)).unwrap();
    writeln!(s, "synchronous projection: {}", if project { "on" } else { "off" }).unwrap();
    writeln!(s, "initial deviation: {}", num(traj.max_deviation[0])).unwrap();
    writeln!(s, "peak deviation: {:e}", peak).unwrap();
    writeln!(
        s,
        "final deviation: {:e} at t = {}",
        final_dev,
        num(*traj.times.last().unwrap())
    )
    .unwrap();
    let verdict = match (traj.diverged, converged) {
        (true, _) => "diverged",
        (false, true) => "converged",
        (false, false) => "not converged",
    };
    writeln!(s, "verdict: {verdict} (tolerance {:e})", a.tol).unwrap();
    out.write_all(s.as_bytes())?;
    Ok(Outcome::from_bool(converged))
}

#[allow(clippy::too_many_arguments)]
fn generate(
    er: &str,
    weights: &str,
    seed: u64,
    allow_disconnected: bool,
    jacobian: Option<Jacobian2>,
    tau: Option<f64>,
    edge_list: bool,
    out: &mut dyn Write,
) -> CliResult<Outcome> {
    let (n, p) = er
        .split_once(',')
        .and_then(|(n, p)| Some((n.trim().parse::<usize>().ok()?, p.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| CliError::Input(format!("bad --er `{er}`: expected `n,p`")))?;
    let parts: Vec<&str> = weights.split(',').map(str::trim).collect();
    let bad_w = || CliError::Input(format!("bad --weights `{weights}`: expected `wmin,wmax[,int]`"));
    let (w_min, w_max, integer_weights) = match parts.as_slice() {
        [a, b] => (a.parse().map_err(|_| bad_w())?, b.parse().map_err(|_| bad_w())?, false),
        [a, b, "int"] => (a.parse().map_err(|_| bad_w())?, b.parse().map_err(|_| bad_w())?, true),
        _ => return Err(bad_w()),
    };
    let config = ErConfig {
        n,
        p,
        w_min,
        w_max,
        integer_weights,
        require_connected: !allow_disconnected,
    };
    let g = generate_er(&config, seed)?;
    let models = jacobian.map(|j| vec![PatchModel::linear(j); n]);
    let doc = NetworkDocument::from_graph(&g, models.as_deref(), tau);
    let text = if edge_list {
        doc.to_edge_list()
    } else {
        doc.to_json() + "\n"
    };
    out.write_all(text.as_bytes())?;
    Ok(Outcome::Positive)
}
