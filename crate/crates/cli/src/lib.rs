//! Command-line front end for `sparsecut`.
//!
//! Each subcommand reads a graph, runs one stage of the pipeline, writes
//! any requested artifacts atomically and returns a [`Report`]. All
//! randomness comes from `--seed`; `--epsilon 0` runs the exact algorithm.

pub mod report;
mod verify;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use sparsecut::io::{self, Format, ParsedGraph};
use sparsecut::oracle::{self, DEFAULT_ORACLE_CAP};
use sparsecut::{
    approx_max_flow_with_plan, approx_min_cut, compress, estimation, exact_strengths, max_flow,
    smooth, window_estimation, Graph, SamplingMode, SparsifyParams, StrengthLabels,
};
use thiserror::Error;

pub use report::{Check, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("size cap: {0}")]
    SizeCap(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Parse { .. } => 3,
            Self::SizeCap(_) => 4,
            Self::Invariant(_) => 5,
            Self::Io { .. } => 1,
        }
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Self + '_ {
        move |source| Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<sparsecut::Error> for CliError {
    fn from(err: sparsecut::Error) -> Self {
        use sparsecut::Error as E;
        match err {
            E::SizeCap { .. } => Self::SizeCap(err.to_string()),
            E::InvalidParameter(_) | E::SameTerminals(_) | E::VertexOutOfRange { .. } => {
                Self::Usage(err.to_string())
            }
            E::Parse { .. } | E::InvalidLabel { .. } | E::LengthMismatch { .. } => Self::Parse {
                path: "input".into(),
                message: err.to_string(),
            },
            other => Self::Invariant(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "sparsecut",
    version,
    about = "Strength-based cut sparsification, smoothing and approximate cuts and flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Accuracy; 0 skips sampling and runs exactly.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Confidence exponent: failure probability is about n^-d.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// bernoulli, binomial, simplified or poisson.
    #[arg(long, default_value = "simplified")]
    pub mode: SamplingMode,
    /// Round sampled weights down to integers, keeping expectations.
    #[arg(long)]
    pub rounding: bool,
}

impl SampleArgs {
    fn params(&self) -> CliResult<SparsifyParams> {
        let p = SparsifyParams::new(self.epsilon, self.d, self.seed)
            .with_mode(self.mode)
            .with_integer_rounding(self.rounding);
        p.validate_allow_exact()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct Terminals {
    /// Source vertex (1-based). Defaults to the DIMACS `n ... s` line.
    #[arg(long)]
    pub source: Option<usize>,
    /// Sink vertex (1-based). Defaults to the DIMACS `n ... t` line.
    #[arg(long)]
    pub sink: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// estimation for unit-weight graphs, window otherwise.
    Auto,
    Estimation,
    Window,
    /// Oracle strengths by subset enumeration (small graphs only).
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusChoice {
    Small,
    Full,
    None,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute strength labels.
    Strength {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long)]
        write_labels: Option<PathBuf>,
    },
    /// Compress a graph so all cuts stay within 1 ± ε.
    Sparsify {
        graph: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
        /// Labels file to use instead of computing labels.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long)]
        write_graph: Option<PathBuf>,
        #[arg(long)]
        write_labels: Option<PathBuf>,
    },
    /// Split edges into parallel pieces so the graph is c-smooth.
    Smooth {
        graph: PathBuf,
        /// Smoothness parameter, or `auto` for m/n.
        #[arg(long, default_value = "auto")]
        smooth_c: SmoothC,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        write_graph: Option<PathBuf>,
    },
    /// Approximate minimum s-t cut.
    Mincut {
        graph: PathBuf,
        #[command(flatten)]
        terminals: Terminals,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Approximate maximum s-t flow.
    Maxflow {
        graph: PathBuf,
        #[command(flatten)]
        terminals: Terminals,
        #[command(flatten)]
        sample: SampleArgs,
        /// Write per-edge flows as `f <edge> <value>` lines.
        #[arg(long)]
        write_flow: Option<PathBuf>,
    },
    /// Run the oracle-backed property suite.
    Verify {
        /// Extra graph to check alongside the corpus.
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CorpusChoice::Small)]
        corpus: CorpusChoice,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        /// Compression seeds per graph for the empirical cut-accuracy row.
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// `--smooth-c` value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothC {
    Auto,
    Value(f64),
}

impl std::str::FromStr for SmoothC {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        match s.parse::<f64>() {
            Ok(c) if c.is_finite() && c > 0.0 => Ok(Self::Value(c)),
            _ => Err(format!("expected `auto` or a positive number, got {s:?}")),
        }
    }
}

struct Input {
    parsed: ParsedGraph,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(CliError::io(path))
}

fn load(path: &Path) -> CliResult<Input> {
    let text = read_text(path)?;
    let parsed = io::parse_graph(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(Input {
        parsed,
        sha256: sha256_hex(text.as_bytes()),
    })
}

fn load_labels(path: &Path, g: &Graph) -> CliResult<StrengthLabels> {
    let labels = io::parse_labels(&read_text(path)?, g.m()).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    labels.validate(g).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(labels)
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(CliError::io(path))?;
    tmp.write_all(contents.as_bytes())
        .map_err(CliError::io(path))?;
    tmp.as_file().sync_all().map_err(CliError::io(path))?;
    tmp.persist(path).map_err(|e| CliError::io(path)(e.error))?;
    Ok(())
}

fn describe_input(r: &mut Report, path: &Path, input: &Input) {
    let g = &input.parsed.graph;
    r.field("input", "path", path.display())
        .field("input", "sha256", &input.sha256)
        .field(
            "input",
            "format",
            match input.parsed.format {
                Format::Ghct => "ghct",
                Format::DimacsMaxFlow => "dimacs-max",
            },
        )
        .field("input", "n", g.n())
        .field("input", "m", g.m())
        .field("input", "total_weight", g.total_weight());
}

fn describe_params(r: &mut Report, p: &SparsifyParams, n: usize) {
    r.field("params", "epsilon", p.epsilon)
        .field("params", "d", p.d);
    if p.is_exact() {
        r.field("params", "rho", "exact");
    } else {
        r.field("params", "rho", format!("{:.6}", p.rho(n)));
    }
    r.field("params", "seed", p.seed)
        .field(
            "params",
            "mode",
            if p.is_exact() { "exact" } else { p.mode.name() },
        )
        .field("params", "rounding", p.integer_rounding);
}

fn describe_labels(r: &mut Report, section: &'static str, g: &Graph, labels: &StrengthLabels) {
    let kind = match labels.kind {
        sparsecut::LabelKind::Exact => "exact",
        sparsecut::LabelKind::Estimated => "estimated",
    };
    r.field(section, "labels_kind", kind)
        .field(section, "labels_cost", format!("{:.6}", labels.cost(g)))
        .field(section, "labels_min", labels.min().unwrap_or(0.0))
        .field(section, "labels_max", labels.max().unwrap_or(0.0));
}

fn compute_labels(
    g: &Graph,
    method: Method,
    cap: usize,
) -> CliResult<(StrengthLabels, &'static str)> {
    Ok(match method {
        Method::Exact => (exact_strengths(g, cap)?, "exact"),
        Method::Estimation => {
            if !g.is_unweighted() {
                return Err(CliError::Usage(
                    "estimation needs unit weights; use --method window".into(),
                ));
            }
            (estimation(g, 1.0)?, "estimation")
        }
        Method::Window => (window_estimation(g)?, "window"),
        Method::Auto if g.is_unweighted() => (estimation(g, 1.0)?, "estimation"),
        Method::Auto => (window_estimation(g)?, "window"),
    })
}

/// Cost constants `(guaranteed, target)` for a labelling method. Each
/// estimation level labels a `WeakEdges(H, 2k)` output of weight at most
/// `8k(r-1)` with `k`, so `8(n-1)` is guaranteed; windows count each edge
/// in at most three phases. The targets are the tighter constants that
/// hold on simple graphs.
pub(crate) fn cost_factors(method: &str) -> (f64, f64) {
    if method == "estimation" {
        (8.0, 4.0)
    } else {
        (24.0, 12.0)
    }
}

/// Oracle soundness and cost rows for `labels`, when the graph is small
/// enough for the oracle.
fn label_checks(
    r: &mut Report,
    g: &Graph,
    labels: &StrengthLabels,
    method: &str,
    cap: usize,
) -> CliResult<()> {
    let n1 = g.n().saturating_sub(1) as f64;
    let (proven, target) = cost_factors(method);
    let cost = labels.cost(g);
    r.check(Check::invariant(
        "label-cost",
        method,
        cost <= proven * n1 + 1e-9,
        format!("Σu/k̃ = {cost:.4} <= {proven}(n-1) = {}", proven * n1),
    ));
    r.check(Check::empirical(
        "label-cost-target",
        method,
        cost <= target * n1 + 1e-9,
        format!("Σu/k̃ = {cost:.4} vs {target}(n-1) = {}", target * n1),
    ));
    if g.n() <= cap {
        let exact = oracle::oracle_strengths_capped(g, cap)?;
        let above = labels
            .labels
            .iter()
            .zip(&exact)
            .filter(|(l, k)| **l > **k * (1.0 + 1e-12))
            .count();
        r.check(Check::invariant(
            "label-soundness",
            method,
            above == 0,
            format!("{above} of {} labels above oracle strength", g.m()),
        ));
    } else {
        r.check(Check::empirical(
            "label-soundness",
            method,
            true,
            format!("skipped: n = {} exceeds oracle cap {cap}", g.n()),
        ));
    }
    Ok(())
}

fn terminals(t: &Terminals, input: &Input) -> CliResult<(usize, usize)> {
    let n = input.parsed.graph.n();
    let dimacs = input.parsed.terminals;
    let pick = |flag: Option<usize>, fallback: Option<usize>, name: &str| -> CliResult<usize> {
        match (flag, fallback) {
            (Some(v), _) if v >= 1 && v <= n => Ok(v - 1),
            (Some(v), _) => Err(CliError::Usage(format!("--{name} {v} is outside 1..={n}"))),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(CliError::Usage(format!(
                "--{name} is required for this input"
            ))),
        }
    };
    let s = pick(t.source, dimacs.map(|d| d.0), "source")?;
    let k = pick(t.sink, dimacs.map(|d| d.1), "sink")?;
    if s == k {
        return Err(CliError::Usage("source and sink must differ".into()));
    }
    Ok((s, k))
}

fn vertex_list(side: &[bool], want: bool) -> String {
    let ids: Vec<String> = side
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == want)
        .map(|(v, _)| (v + 1).to_string())
        .collect();
    ids.join(" ")
}

/// Runs one subcommand and returns its report.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Strength {
            graph,
            method,
            oracle_cap,
            write_labels,
        } => cmd_strength(graph, *method, *oracle_cap, write_labels.as_deref())?,
        Command::Sparsify {
            graph,
            sample,
            labels,
            oracle_cap,
            write_graph,
            write_labels,
        } => cmd_sparsify(
            graph,
            sample,
            labels.as_deref(),
            *oracle_cap,
            write_graph.as_deref(),
            write_labels.as_deref(),
        )?,
        Command::Smooth {
            graph,
            smooth_c,
            labels,
            write_graph,
        } => cmd_smooth(graph, *smooth_c, labels.as_deref(), write_graph.as_deref())?,
        Command::Mincut {
            graph,
            terminals,
            sample,
        } => cmd_mincut(graph, terminals, sample)?,
        Command::Maxflow {
            graph,
            terminals,
            sample,
            write_flow,
        } => cmd_maxflow(graph, terminals, sample, write_flow.as_deref())?,
        Command::Verify {
            graph,
            corpus,
            oracle_cap,
            trials,
            epsilon,
            seed,
        } => verify::cmd_verify(
            graph.as_deref(),
            *corpus,
            *oracle_cap,
            *trials,
            *epsilon,
            *seed,
        )?,
    };
    report.set_wall_time(start.elapsed().as_secs_f64());
    Ok(report)
}

fn cmd_strength(
    path: &Path,
    method: Method,
    cap: usize,
    write_labels: Option<&Path>,
) -> CliResult<Report> {
    let input = load(path)?;
    let g = &input.parsed.graph;
    let mut r = Report::new("strength");
    describe_input(&mut r, path, &input);
    let (labels, used) = compute_labels(g, method, cap)?;
    r.field("params", "method", used)
        .field("params", "oracle_cap", cap);
    describe_labels(&mut r, "outputs", g, &labels);
    if let Some(out) = write_labels {
        let text = io::write_labels(&labels);
        write_atomic(out, &text)?;
        r.field("outputs", "labels_file", out.display()).field(
            "outputs",
            "labels_sha256",
            sha256_hex(text.as_bytes()),
        );
    }
    if used != "exact" {
        label_checks(&mut r, g, &labels, used, cap)?;
    }
    Ok(r)
}

fn cmd_sparsify(
    path: &Path,
    sample: &SampleArgs,
    labels_path: Option<&Path>,
    cap: usize,
    write_graph: Option<&Path>,
    write_labels: Option<&Path>,
) -> CliResult<Report> {
    let input = load(path)?;
    let g = &input.parsed.graph;
    let params = sample.params()?;
    let mut r = Report::new("sparsify");
    describe_input(&mut r, path, &input);
    describe_params(&mut r, &params, g.n());

    let (labels, method) = match labels_path {
        Some(p) => (load_labels(p, g)?, "file"),
        None => compute_labels(g, Method::Auto, cap)?,
    };
    r.field("params", "labels", method);
    let output = if params.is_exact() {
        r.field("outputs", "expected_edges", g.m());
        g.clone()
    } else {
        let c = compress(g, &labels, &params)?;
        r.field(
            "outputs",
            "expected_edges",
            format!("{:.3}", c.expected_edges()),
        );
        c.graph
    };
    let text = io::write_ghct(&output);
    r.field("outputs", "edges_in", g.m())
        .field("outputs", "edges_out", output.m())
        .field("outputs", "total_weight_in", g.total_weight())
        .field("outputs", "total_weight_out", output.total_weight())
        .field("outputs", "graph_sha256", sha256_hex(text.as_bytes()));
    describe_labels(&mut r, "outputs", g, &labels);
    if let Some(out) = write_graph {
        write_atomic(out, &text)?;
        r.field("outputs", "graph_file", out.display());
    }
    if let Some(out) = write_labels {
        write_atomic(out, &io::write_labels(&labels))?;
        r.field("outputs", "labels_file", out.display());
    }

    if method != "file" {
        label_checks(&mut r, g, &labels, method, cap)?;
    }
    if !params.is_exact() && g.n() >= 2 && g.n() <= oracle::CUT_ENUMERATION_CAP.min(16) {
        let before = oracle::enumerate_cuts(g)?;
        let after = oracle::enumerate_cuts(&output)?;
        let worst = before
            .iter()
            .zip(&after)
            .map(|(a, b)| {
                if a.value > 0.0 {
                    (b.value / a.value - 1.0).abs()
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        r.check(Check::empirical(
            "cut-accuracy",
            "all cuts",
            worst <= params.epsilon,
            format!("max relative deviation {worst:.4} (ε = {})", params.epsilon),
        ));
    }
    Ok(r)
}

fn cmd_smooth(
    path: &Path,
    c: SmoothC,
    labels_path: Option<&Path>,
    write_graph: Option<&Path>,
) -> CliResult<Report> {
    let input = load(path)?;
    let g = &input.parsed.graph;
    let mut r = Report::new("smooth");
    describe_input(&mut r, path, &input);
    let c = match c {
        SmoothC::Value(c) => c,
        SmoothC::Auto if g.n() > 0 && g.m() > 0 => g.m() as f64 / g.n() as f64,
        SmoothC::Auto => 1.0,
    };
    let (labels, method) = match labels_path {
        Some(p) => (load_labels(p, g)?, "file"),
        None => compute_labels(g, Method::Window, DEFAULT_ORACLE_CAP)?,
    };
    r.field("params", "c", c).field("params", "labels", method);
    let s = smooth(g, &labels, c)?;
    let text = io::write_ghct(&s.graph);
    let cost = labels.cost(g);
    r.field("outputs", "edges_in", g.m())
        .field("outputs", "edges_out", s.graph.m())
        .field("outputs", "graph_sha256", sha256_hex(text.as_bytes()));
    describe_labels(&mut r, "outputs", g, &labels);
    if let Some(out) = write_graph {
        write_atomic(out, &text)?;
        r.field("outputs", "graph_file", out.display());
    }
    let bound = g.m() as f64 + c * cost;
    r.check(Check::invariant(
        "piece-count",
        "smooth",
        s.graph.m() as f64 <= bound + 1e-9,
        format!("{} <= m + c·Σu/k̃ = {bound:.3}", s.graph.m()),
    ));
    let rough = s
        .graph
        .edges()
        .iter()
        .zip(&s.parent)
        .filter(|(e, &p)| c * e.weight > labels.labels[p])
        .count();
    r.check(Check::invariant(
        "smoothness",
        "smooth",
        rough == 0,
        format!("{rough} pieces with c·capacity > k̃"),
    ));
    Ok(r)
}

fn cmd_mincut(path: &Path, t: &Terminals, sample: &SampleArgs) -> CliResult<Report> {
    let input = load(path)?;
    let g = &input.parsed.graph;
    let (s, k) = terminals(t, &input)?;
    let params = sample.params()?;
    let mut r = Report::new("mincut");
    describe_input(&mut r, path, &input);
    r.field("params", "source", s + 1)
        .field("params", "sink", k + 1);
    describe_params(&mut r, &params, g.n());

    let result = approx_min_cut(g, s, k, &params)?;
    let exact = max_flow(g, s, k)?.value;
    r.field("outputs", "value", result.value);
    if let Some(cv) = result.compressed_value {
        r.field("outputs", "compressed_value", cv);
    }
    r.field("outputs", "exact_value", exact).field(
        "outputs",
        "source_side",
        vertex_list(&result.cut.side, result.cut.side[s]),
    );
    let value = g.cut_value(&result.cut.side)?;
    r.check(Check::invariant(
        "separates",
        "cut",
        result.cut.side[s] != result.cut.side[k],
        "source and sink on opposite sides",
    ));
    r.check(Check::invariant(
        "at-least-optimum",
        "cut",
        value >= exact * (1.0 - 1e-9),
        format!("{value} >= {exact}"),
    ));
    let limit = (1.0 + 3.0 * params.epsilon) * exact;
    r.check(Check::empirical(
        "within-(1+3ε)",
        "cut",
        value <= limit * (1.0 + 1e-9),
        format!("{value} <= {limit}"),
    ));
    Ok(r)
}

fn cmd_maxflow(
    path: &Path,
    t: &Terminals,
    sample: &SampleArgs,
    write_flow: Option<&Path>,
) -> CliResult<Report> {
    let input = load(path)?;
    let g = &input.parsed.graph;
    let (s, k) = terminals(t, &input)?;
    let params = sample.params()?;
    let mut r = Report::new("maxflow");
    describe_input(&mut r, path, &input);
    r.field("params", "source", s + 1)
        .field("params", "sink", k + 1);
    describe_params(&mut r, &params, g.n());

    let (flow, plan) = approx_max_flow_with_plan(g, s, k, &params)?;
    let exact = if params.is_exact() {
        flow.value
    } else {
        max_flow(g, s, k)?.value
    };
    r.field("outputs", "value", flow.value)
        .field("outputs", "exact_value", exact)
        .field("outputs", "smoothness_c", format!("{:.6}", plan.c))
        .field("outputs", "group_rate", format!("{:.6}", plan.p))
        .field("outputs", "groups", plan.groups)
        .field("outputs", "pieces", plan.pieces);
    if let Some(out) = write_flow {
        let mut text = String::new();
        for (i, f) in flow.flows.iter().enumerate() {
            text.push_str(&format!("f {} {f}\n", i + 1));
        }
        write_atomic(out, &text)?;
        r.field("outputs", "flow_file", out.display());
    }
    let feasible = flow.check(g);
    r.check(Check::invariant(
        "feasible",
        "flow",
        feasible.is_ok(),
        match &feasible {
            Ok(()) => "capacities and conservation hold".to_string(),
            Err(v) => format!("{v:?}"),
        },
    ));
    let floor = (1.0 - params.epsilon) * exact;
    r.check(Check::empirical(
        "within-(1-ε)",
        "flow",
        flow.value >= floor * (1.0 - 1e-9),
        format!("{} >= {floor}", flow.value),
    ));
    Ok(r)
}
