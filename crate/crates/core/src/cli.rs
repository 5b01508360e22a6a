//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a certification row fails, 2 on usage or
//! input errors, 3 when a computation hits a capacity limit.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::adversarial::{curvature_witness_with, p_additive_witness_with, sequential_half_witness, WitnessInstance};
use crate::bounds::{
    certify_with, curvature_eta_bounds, curvature_graph_bounds_with, graph_ratio_bounds_with, min_edges_bound, rho,
    BoundsReport, SuiteEntry,
};
use crate::graphmetrics::ExactSearch;
use crate::greedy::{brute_force_optimum_with, run_greedy_with, TiePolicy};
use crate::io;
use crate::objective::check_properties_with;
use crate::rational::{self, Rational};
use crate::structure::{
    complement_turan, earliest_schedule, induced_graph, optimal_assignment, optimal_graph, turan_graph,
    InformationGraph,
};
use crate::suites::{random_suite, witness_suite};
use crate::{Error, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pargreedy",
    version,
    about = "Parallelized greedy submodular maximization over information graphs"
)]
pub struct Cli {
    /// Emit a single JSON document instead of key=value lines.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(flatten)]
    pub caps: Caps,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Caps {
    /// Largest ground set for exhaustive objective checks.
    #[arg(long, global = true, default_value_t = 16)]
    pub ground_cap: usize,
    /// Largest graph for exact invariants.
    #[arg(long, global = true, default_value_t = 20)]
    pub graph_cap: usize,
    /// Most tie-tree nodes expanded by one greedy run.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub tie_cap: u64,
    /// Most action profiles enumerated for an optimum.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub profile_cap: u64,
}

impl Caps {
    fn limits(&self) -> Limits {
        Limits {
            ground: self.ground_cap,
            graph: self.graph_cap,
            tie_nodes: self.tie_cap,
            profiles: self.profile_cap,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds: rho(n, q), curvature bounds, graph bounds or the
    /// minimum edge count.
    Bounds(BoundsArgs),
    /// Build a graph or an iteration assignment.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Exact invariants of a graph or properties of an instance.
    Analyze {
        #[command(subcommand)]
        what: AnalyzeCommand,
    },
    /// Earliest schedule of a graph, or validation of an assignment.
    Schedule(ScheduleArgs),
    /// Run greedy on an instance and compare with the optimum.
    Run(RunArgs),
    /// Generate a witness instance.
    Adversarial {
        #[command(subcommand)]
        what: AdversarialCommand,
    },
    /// Compare bounds with brute-force ratios over a suite.
    Certify(CertifyArgs),
    /// Export bound curves as CSV.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Clique count for the minimum edge bound.
    #[arg(long)]
    pub k: Option<usize>,
    /// Total curvature, as p/q.
    #[arg(long, value_parser = parse_rational)]
    pub lambda: Option<Rational>,
    /// Graph file; reports the graph bounds instead of rho.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Optimal,
    InducedOptimal,
    Turan,
    ComplementTuran,
    Edgeless,
    Complete,
    Path,
    Star,
}

/// A graph from a file or from a named family.
#[derive(Debug, Args)]
pub struct GraphSource {
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Vertex count for a family.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCommand {
    Graph {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The optimal iteration assignment for n agents and q iterations.
    Assignment {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    Graph {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also report p-pseudo-independence and the p-sibling property.
        #[arg(long)]
        p: Option<usize>,
    },
    Instance {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, conflicts_with = "assignment", required_unless_present = "assignment")]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub assignment: Option<PathBuf>,
    /// Where to write the induced graph of an assignment.
    #[arg(long, requires = "assignment")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    First,
    Last,
    Worst,
    Best,
    All,
}

impl From<PolicyArg> for TiePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::First => TiePolicy::First,
            PolicyArg::Last => TiePolicy::Last,
            PolicyArg::Worst => TiePolicy::Worst,
            PolicyArg::Best => TiePolicy::Best,
            PolicyArg::All => TiePolicy::All,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Graph file; defaults to the graph embedded in the instance.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "worst")]
    pub policy: PolicyArg,
}

#[derive(Debug, Subcommand)]
pub enum AdversarialCommand {
    /// Curvature witness with parameter lambda.
    Curvature {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_parser = parse_rational)]
        lambda: Rational,
        #[command(flatten)]
        output: WitnessOutput,
    },
    /// p-additive witness.
    PAdditive {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        output: WitnessOutput,
    },
    /// Two-agent sequential instance with ratio 1/2.
    Half {
        #[command(flatten)]
        output: WitnessOutput,
    },
}

#[derive(Debug, Args)]
pub struct WitnessOutput {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also compute the empirical ratio by enumeration.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    Witnesses,
    Random,
    Files,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteKind,
    #[arg(long, default_value_t = 4)]
    pub alpha_max: usize,
    /// Comma-separated curvature values.
    #[arg(long, value_delimiter = ',', value_parser = parse_rational, default_value = "0,1/4,1/2,3/4,1")]
    pub lambdas: Vec<Rational>,
    /// Required for random suites.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Instance files with embedded graphs, for `--suite files`.
    #[arg(long = "in")]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    CurvatureBounds,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub curve: Curve,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,20")]
    pub r: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub lambda_steps: usize,
    /// `csv` for standard output, otherwise a file path.
    #[arg(long, default_value = "csv")]
    pub out: String,
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

/// What a command produced: text lines, the same content as JSON, and the
/// exit status it asks for.
pub struct Report {
    lines: Vec<String>,
    json: Value,
    code: i32,
}

impl Report {
    fn new(lines: Vec<String>, json: Value) -> Self {
        Report {
            lines,
            json,
            code: EXIT_OK,
        }
    }
}

/// Result of [`dispatch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn kv(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt(r: Rational) -> String {
    rational::format(&r)
}

fn fmt_opt(r: Option<Rational>) -> String {
    r.map_or_else(|| "none".to_string(), fmt)
}

fn exact(r: Rational) -> Value {
    serde_json::to_value(rational::Exact(r)).expect("rationals serialize")
}

fn exact_opt(r: Option<Rational>) -> Value {
    r.map_or(Value::Null, exact)
}

fn exit_for(err: &Error) -> i32 {
    if err.is_capacity() {
        EXIT_CAPACITY
    } else {
        EXIT_USAGE
    }
}

/// Parses `argv` (including the program name), runs the command and renders
/// its report.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let limits = cli.caps.limits();
    match execute(&cli.command, &limits) {
        Ok(report) => {
            let stdout = if cli.json {
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report.json).expect("reports serialize")
                )
            } else {
                report.lines.iter().map(|l| format!("{l}\n")).collect()
            };
            Outcome {
                code: report.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(err) => Outcome {
            code: exit_for(&err),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        },
    }
}

fn execute(command: &Command, limits: &Limits) -> crate::Result<Report> {
    match command {
        Command::Bounds(args) => bounds(args, limits),
        Command::Construct { what } => construct(what),
        Command::Analyze { what } => analyze(what, limits),
        Command::Schedule(args) => schedule(args),
        Command::Run(args) => run(args, limits),
        Command::Adversarial { what } => adversarial(what, limits),
        Command::Certify(args) => certify(args, limits),
        Command::Scan(args) => scan(args),
    }
}

fn required<T: Copy>(value: Option<T>, flag: &str, why: &str) -> crate::Result<T> {
    value.ok_or_else(|| Error::input(flag, format!("is required {why}")))
}

fn write_file(path: &Path, text: &str) -> crate::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::input("--out", format!("{}: {e}", path.display())))
}

fn bounds(args: &BoundsArgs, limits: &Limits) -> crate::Result<Report> {
    let search = ExactSearch::new(limits.graph);
    if let Some(path) = &args.graph {
        let g = io::load_graph(path)?;
        let plain = graph_ratio_bounds_with(&g, &search)?;
        let alpha = search.independence_number(&g)?.value;
        let theta = search.clique_cover_number(&g)?.value;
        let mut pairs = vec![
            ("alpha", alpha.to_string()),
            ("theta", theta.to_string()),
            ("upper", fmt(plain.upper)),
            ("lower", fmt(plain.lower)),
            ("refined_upper", fmt_opt(plain.refined_upper)),
        ];
        let mut doc = json!({
            "alpha": alpha, "theta": theta,
            "upper": exact(plain.upper), "lower": exact(plain.lower),
            "refined_upper": exact_opt(plain.refined_upper),
        });
        if let Some(lambda) = args.lambda {
            let b = curvature_graph_bounds_with(&g, lambda, &search)?;
            pairs.push(("lambda", fmt(lambda)));
            pairs.push(("curvature_upper", fmt(b.upper)));
            pairs.push(("curvature_lower", fmt(b.lower)));
            doc["lambda"] = exact(lambda);
            doc["curvature_upper"] = exact(b.upper);
            doc["curvature_lower"] = exact(b.lower);
        }
        return Ok(Report::new(vec![kv(&pairs)], doc));
    }
    let n = required(args.n, "--n", "unless --graph is given")?;
    if let Some(k) = args.k {
        let m = min_edges_bound(n, k)?;
        return Ok(Report::new(vec![format!("min_edges={m}")], json!({ "min_edges": m })));
    }
    let q = required(args.q, "--q", "with --n (or pass --k for the edge bound)")?;
    let value = rho(n, q)?;
    let mut lines = vec![format!("rho={}", fmt(value))];
    let mut doc = json!({ "rho": exact(value) });
    if let Some(lambda) = args.lambda {
        let b = curvature_eta_bounds(n, q, lambda)?;
        lines.push(kv(&[
            ("lambda", fmt(lambda)),
            ("lower", fmt(b.lower)),
            ("upper", fmt(b.upper)),
        ]));
        doc["lambda"] = exact(lambda);
        doc["lower"] = exact(b.lower);
        doc["upper"] = exact(b.upper);
    }
    Ok(Report::new(lines, doc))
}

fn family_graph(family: Family, n: usize, q: Option<usize>, r: Option<usize>) -> crate::Result<InformationGraph> {
    let need_q = || required(q, "--q", "for this family");
    let need_r = || required(r, "--r", "for this family");
    if n == 0 {
        return Err(Error::input("--n", "must be a positive integer"));
    }
    match family {
        Family::Optimal => optimal_graph(n, need_q()?),
        Family::InducedOptimal => induced_graph(&optimal_assignment(n, need_q()?)?),
        Family::Turan => turan_graph(n, need_r()?),
        Family::ComplementTuran => complement_turan(n, need_r()?),
        Family::Edgeless => Ok(InformationGraph::edgeless(n)),
        Family::Complete => Ok(InformationGraph::complete(n)),
        Family::Path => Ok(InformationGraph::path(n)),
        Family::Star => Ok(InformationGraph::star(n - 1)),
    }
}

fn resolve_graph(source: &GraphSource) -> crate::Result<InformationGraph> {
    match (&source.graph, source.family) {
        (Some(path), _) => io::load_graph(path),
        (None, Some(family)) => family_graph(family, required(source.n, "--n", "with --family")?, source.q, source.r),
        (None, None) => Err(Error::input("--graph", "pass --graph FILE or --family NAME --n N")),
    }
}

/// Writes `text` to `out` when given, otherwise returns it as the report.
fn emit_document(text: String, doc: Value, out: Option<&PathBuf>) -> crate::Result<Report> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            let shown = path.display().to_string();
            Ok(Report::new(vec![format!("wrote={shown}")], json!({ "wrote": shown })))
        }
        None => Ok(Report::new(vec![text], doc)),
    }
}

fn construct(what: &ConstructCommand) -> crate::Result<Report> {
    match what {
        ConstructCommand::Graph { family, n, q, r, out } => {
            let doc = io::graph_to_doc(&family_graph(*family, *n, *q, *r)?);
            emit_document(
                io::to_json(&doc),
                serde_json::to_value(&doc).expect("serializes"),
                out.as_ref(),
            )
        }
        ConstructCommand::Assignment { n, q, out } => {
            let doc = io::assignment_to_doc(&optimal_assignment(*n, *q)?);
            emit_document(
                io::to_json(&doc),
                serde_json::to_value(&doc).expect("serializes"),
                out.as_ref(),
            )
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn analyze(what: &AnalyzeCommand, limits: &Limits) -> crate::Result<Report> {
    let search = ExactSearch::new(limits.graph);
    match what {
        AnalyzeCommand::Graph { input, p } => {
            let g = io::load_graph(input)?;
            let alpha = search.independence_number(&g)?;
            let theta = search.clique_cover_number(&g)?;
            let omega = search.clique_number(&g)?;
            let depth = earliest_schedule(&g).depth;
            let sibling = search.has_sibling_condition(&g)?;
            let mut lines = vec![
                kv(&[
                    ("alpha", alpha.value.to_string()),
                    ("theta", theta.value.to_string()),
                    ("omega", omega.value.to_string()),
                    ("feasible_q", depth.to_string()),
                    ("edges", g.edge_count().to_string()),
                ]),
                kv(&[
                    ("independent_set", join(alpha.vertices())),
                    ("max_clique", join(omega.vertices())),
                    ("sibling", sibling.is_some().to_string()),
                ]),
            ];
            let mut doc = json!({
                "alpha": alpha.value, "theta": theta.value, "omega": omega.value,
                "feasible_q": depth, "edges": g.edge_count(),
                "independent_set": alpha.vertices(), "clique_cover": theta.parts(),
                "max_clique": omega.vertices(), "sibling": sibling,
            });
            if let Some(p) = *p {
                let ap = search.pseudo_independence_number(&g, p)?;
                let ps = search.has_p_sibling(&g, p)?;
                lines.push(kv(&[
                    ("p", p.to_string()),
                    ("alpha_p", ap.value.to_string()),
                    ("p_sibling", ps.is_some().to_string()),
                ]));
                doc["p"] = json!(p);
                doc["alpha_p"] = json!(ap.value);
                doc["p_sibling"] = json!(ps);
            }
            Ok(Report::new(lines, doc))
        }
        AnalyzeCommand::Instance { input } => {
            let inst = io::load_instance(input)?;
            let report = check_properties_with(&inst.f, limits)?;
            let mut pairs = vec![
                ("kind", inst.f.kind().as_str().to_string()),
                ("ground", inst.f.len().to_string()),
                ("agents", inst.x.n().to_string()),
                ("normalized", report.normalized.to_string()),
                ("monotone", report.monotone.to_string()),
                ("submodular", report.submodular.to_string()),
                ("curvature", fmt_opt(report.curvature)),
            ];
            if let Some(v) = report.counterexamples.first() {
                pairs.push(("counterexample", serde_json::to_string(v).expect("serializes")));
            }
            let doc = json!({
                "kind": inst.f.kind().as_str(), "ground": inst.f.len(), "agents": inst.x.n(),
                "properties": report,
            });
            Ok(Report::new(vec![kv(&pairs)], doc))
        }
    }
}

fn schedule(args: &ScheduleArgs) -> crate::Result<Report> {
    if let Some(path) = &args.graph {
        let g = io::load_graph(path)?;
        let s = earliest_schedule(&g);
        let levels = s.assignment.levels().to_vec();
        return Ok(Report::new(
            vec![kv(&[("depth", s.depth.to_string()), ("P", join(&levels))])],
            json!({ "depth": s.depth, "P": levels }),
        ));
    }
    let path = args.assignment.as_ref().expect("clap requires one source");
    let p = io::load_assignment(path)?;
    let g = induced_graph(&p)?;
    if let Some(out) = &args.out {
        write_file(out, &io::to_json(&io::graph_to_doc(&g)))?;
    }
    Ok(Report::new(
        vec![kv(&[
            ("valid", "true".to_string()),
            ("q", p.q().to_string()),
            ("P", join(p.levels())),
            ("induced_edges", g.edge_count().to_string()),
        ])],
        json!({ "valid": true, "q": p.q(), "P": p.levels(), "induced_edges": g.edge_count() }),
    ))
}

fn profile_text(profile: &[Option<String>]) -> String {
    profile
        .iter()
        .map(|d| d.clone().unwrap_or_else(|| "-".to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

fn run(args: &RunArgs, limits: &Limits) -> crate::Result<Report> {
    let inst = io::load_instance(&args.instance)?;
    let g = match (&args.graph, inst.graph) {
        (Some(path), _) => io::load_graph(path)?,
        (None, Some(g)) => g,
        (None, None) => {
            return Err(Error::input(
                "--graph",
                "the instance has no embedded graph; pass --graph FILE",
            ))
        }
    };
    let outcomes = run_greedy_with(&inst.f, &inst.x, &g, args.policy.into(), limits)?;
    let optimum = brute_force_optimum_with(&inst.f, &inst.x, limits)?;
    let opt_ids: Vec<Option<String>> = optimum
        .profile
        .iter()
        .map(|d| d.map(|e| inst.f.ground()[e].clone()))
        .collect();
    let mut lines = vec![kv(&[
        ("optimum", fmt(optimum.value)),
        ("optimal_profile", profile_text(&opt_ids)),
    ])];
    let mut records = Vec::new();
    for o in &outcomes {
        let rec = o.record(&inst.f);
        let ratio = (optimum.value != rational::int(0)).then(|| o.value / optimum.value);
        lines.push(kv(&[
            ("value", fmt(o.value)),
            ("ratio", fmt_opt(ratio)),
            ("profile", profile_text(&rec.profile)),
            ("resolutions_explored", o.resolutions_explored.to_string()),
        ]));
        let mut v = serde_json::to_value(&rec).expect("serializes");
        v["ratio"] = exact_opt(ratio);
        records.push(v);
    }
    let doc = json!({
        "policy": serde_json::to_value(TiePolicy::from(args.policy)).expect("serializes"),
        "optimum": exact(optimum.value),
        "optimal_profile": opt_ids,
        "outcomes": records,
    });
    Ok(Report::new(lines, doc))
}

fn adversarial(what: &AdversarialCommand, limits: &Limits) -> crate::Result<Report> {
    let search = ExactSearch::new(limits.graph);
    let (w, output): (WitnessInstance, &WitnessOutput) = match what {
        AdversarialCommand::Curvature { source, lambda, output } => (
            curvature_witness_with(&resolve_graph(source)?, *lambda, &search)?,
            output,
        ),
        AdversarialCommand::PAdditive { source, p, output } => {
            (p_additive_witness_with(&resolve_graph(source)?, *p, &search)?, output)
        }
        AdversarialCommand::Half { output } => (sequential_half_witness(), output),
    };
    let doc = io::witness_to_doc(&w);
    let mut pairs = vec![
        ("bound_ref", w.bound_ref.as_str().to_string()),
        ("predicted_ratio", fmt(w.predicted_ratio)),
    ];
    let mut summary = json!({
        "bound_ref": w.bound_ref.as_str(),
        "predicted_ratio": exact(w.predicted_ratio),
    });
    if output.verify {
        let empirical = crate::greedy::evaluate_ratio_with(&w.f, &w.x, &w.g, limits)?.ratio;
        pairs.push(("empirical_ratio", fmt(empirical)));
        summary["empirical_ratio"] = exact(empirical);
    }
    match &output.out {
        Some(path) => {
            write_file(path, &io::to_json(&doc))?;
            pairs.push(("wrote", path.display().to_string()));
            summary["wrote"] = json!(path.display().to_string());
            Ok(Report::new(vec![kv(&pairs)], summary))
        }
        None => {
            let mut full = serde_json::to_value(&doc).expect("serializes");
            if let Some(e) = summary.get("empirical_ratio") {
                full["empirical_ratio"] = e.clone();
            }
            Ok(Report::new(vec![kv(&pairs), io::to_json(&doc)], full))
        }
    }
}

fn certify_suite(args: &CertifyArgs) -> crate::Result<Vec<SuiteEntry>> {
    match args.suite {
        SuiteKind::Witnesses => witness_suite(args.alpha_max, &args.lambdas),
        SuiteKind::Random => {
            let seed = required(args.seed, "--seed", "for random suites")?;
            random_suite(seed, args.count, args.n_max)
        }
        SuiteKind::Files => {
            if args.inputs.is_empty() {
                return Err(Error::input(
                    "--in",
                    "at least one instance file is required for --suite files",
                ));
            }
            args.inputs
                .iter()
                .map(|path| {
                    let inst = io::load_instance(path)?;
                    let g = inst
                        .graph
                        .ok_or_else(|| Error::input("graph", format!("{} has no embedded graph", path.display())))?;
                    Ok(SuiteEntry {
                        id: path.display().to_string(),
                        graph_id: inst.bound_ref.unwrap_or_else(|| "embedded".to_string()),
                        f: inst.f,
                        x: inst.x,
                        g,
                        predicted: inst.predicted_ratio,
                    })
                })
                .collect()
        }
    }
}

fn certify(args: &CertifyArgs, limits: &Limits) -> crate::Result<Report> {
    let suite = certify_suite(args)?;
    let report: BoundsReport = certify_with(&suite, limits);
    let mut lines: Vec<String> = report
        .rows
        .iter()
        .map(|r| {
            let mut pairs = vec![
                ("id", r.id.clone()),
                ("graph", r.graph_id.clone()),
                ("empirical", fmt_opt(r.empirical)),
                ("curvature", fmt_opt(r.curvature)),
                ("lower", fmt_opt(r.lower)),
                ("upper", fmt_opt(r.upper)),
                ("predicted", fmt_opt(r.predicted)),
                ("verdict", r.verdict.as_str().to_string()),
            ];
            if let Some(reason) = &r.reason {
                pairs.push(("reason", format!("{reason:?}")));
            }
            kv(&pairs)
        })
        .collect();
    let s = &report.summary;
    lines.push(format!("rows={}", s.rows));
    lines.push(format!("failures={}", s.failures));
    lines.push(format!("errors={}", s.errors));
    lines.push(format!("witness_equalities={}", s.witness_equalities));
    let mut out = Report::new(lines, serde_json::to_value(&report).expect("serializes"));
    out.code = if s.failures > 0 {
        EXIT_FAIL
    } else if s.capacity_errors > 0 {
        EXIT_CAPACITY
    } else if s.errors > 0 {
        EXIT_USAGE
    } else {
        EXIT_OK
    };
    Ok(out)
}

fn scan(args: &ScanArgs) -> crate::Result<Report> {
    if args.lambda_steps == 0 {
        return Err(Error::input("--lambda-steps", "must be positive"));
    }
    if args.r.contains(&0) {
        return Err(Error::input("--r", "values must be positive"));
    }
    let Curve::CurvatureBounds = args.curve;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::input("--out", e.to_string());
    writer
        .write_record(["r", "lambda", "lower", "upper"])
        .map_err(csv_err)?;
    let mut rows = Vec::new();
    for &r in &args.r {
        for step in 0..=args.lambda_steps {
            let lambda = rational::ratio(step as i64, args.lambda_steps as i64);
            // n = r, q = 1 gives ⌈n/q⌉ = r.
            let b = curvature_eta_bounds(r, 1, lambda)?;
            let dec = |v: Rational| *v.numer() as f64 / *v.denom() as f64;
            let record = [
                r.to_string(),
                format!("{:.6}", dec(lambda)),
                format!("{:.6}", dec(b.lower)),
                format!("{:.6}", dec(b.upper)),
            ];
            writer.write_record(&record).map_err(csv_err)?;
            rows.push(json!({ "r": r, "lambda": exact(lambda), "lower": exact(b.lower), "upper": exact(b.upper) }));
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::input("--out", e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    if args.out == "csv" {
        Ok(Report::new(vec![text.trim_end().to_string()], json!({ "rows": rows })))
    } else {
        let path = PathBuf::from(&args.out);
        write_file(&path, &text)?;
        Ok(Report::new(
            vec![format!("wrote={}", args.out)],
            json!({ "wrote": args.out, "rows": rows.len() }),
        ))
    }
}
