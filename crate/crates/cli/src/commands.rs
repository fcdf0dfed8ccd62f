use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use loopclose::certify::{certify, planner_guarantee, CertifyLevel};
use loopclose::datagen::{
    generate_exchange_graph, generate_pose_graph, sample_ground_truth, EdgeCount, GenSpec, ProbabilityModel, WeightModel,
};
use loopclose::io::{self, PlanFile};
use loopclose::objective::{AnyObjective, Objective, ObjectiveKind, PoseGraph};
use loopclose::planner::{plan, PlannerConfig, PlannerKind};
use loopclose::sweep::{
    alpha_heatmap, alpha_heatmap_csv, alpha_tilde_csv, alpha_tilde_curves, parse_count_grid, parse_grid, run_sweep,
    sweep_csv, SweepSpec,
};
use loopclose::{CommBudget, EdgeId, Graph, Regime};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(loopclose::Error),
    InFile(PathBuf, loopclose::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::InFile(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<loopclose::Error> for CliError {
    fn from(e: loopclose::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn in_file<T>(path: &Path, r: loopclose::Result<T>) -> Result<T> {
    r.map_err(|e| CliError::InFile(path.to_path_buf(), e))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "loopclose", version, about = "Budgeted inter-robot loop-closure selection")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random exchange graph (and optionally a pose graph and ground truth)
    Generate(GenerateArgs),
    /// Run one planner and write the plan
    Plan(PlanArgs),
    /// Certify a plan against the LP bound or the brute-force optimum
    Certify(CertifyArgs),
    /// Run planners over a budget grid, or tabulate approximation factors
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Modular,
    Dcrit,
    Treeconn,
}

impl From<ObjectiveArg> for ObjectiveKind {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Modular => ObjectiveKind::Modular,
            ObjectiveArg::Dcrit => ObjectiveKind::Dcrit,
            ObjectiveArg::Treeconn => ObjectiveKind::Treeconn,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Tu,
    Tn,
    Iu,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Tu => Regime::Tu,
            RegimeArg::Tn => Regime::Tn,
            RegimeArg::Iu => Regime::Iu,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlannerArg {
    Mgreedy,
    Egreedy,
    Vgreedy,
    Sgreedy,
    Random,
}

impl From<PlannerArg> for PlannerKind {
    fn from(p: PlannerArg) -> Self {
        match p {
            PlannerArg::Mgreedy => PlannerKind::MGreedy,
            PlannerArg::Egreedy => PlannerKind::EGreedy,
            PlannerArg::Vgreedy => PlannerKind::VGreedy,
            PlannerArg::Sgreedy => PlannerKind::SGreedy,
            PlannerArg::Random => PlannerKind::Random,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CertifyArg {
    None,
    Lp,
    Brute,
}

impl From<CertifyArg> for CertifyLevel {
    fn from(c: CertifyArg) -> Self {
        match c {
            CertifyArg::None => CertifyLevel::None,
            CertifyArg::Lp => CertifyLevel::Lp,
            CertifyArg::Brute => CertifyLevel::Brute,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    /// Run planners over the grid
    Plans,
    /// Tabulate α(b, k, Δ) and α̃(κ, Δ) without planning
    Alpha,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    robots: usize,
    /// Observations per robot
    #[arg(long)]
    verts: usize,
    /// Fraction of inter-robot pairs that become candidates
    #[arg(long, conflicts_with = "edges")]
    density: Option<f64>,
    /// Exact number of candidates
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cap_degree: Option<usize>,
    /// Comma-separated probabilities assigned cyclically instead of U(0,1)
    #[arg(long)]
    probabilities: Option<String>,
    /// Observation sizes drawn from U(lo, hi), given as lo:hi
    #[arg(long)]
    weights: Option<String>,
    /// Also write pose_graph.g2o
    #[arg(long)]
    pose_graph: bool,
    /// Poses per robot in the pose graph
    #[arg(long)]
    chain_length: Option<usize>,
    /// Also write ground_truth.csv
    #[arg(long)]
    ground_truth: bool,
    /// Existing output directory
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Exchange graph (JSON lines)
    #[arg(long, short)]
    input: PathBuf,
    /// Pose graph for the dcrit and treeconn objectives
    #[arg(long)]
    pose_graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Modular)]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value_t = RegimeArg::Tu)]
    regime: RegimeArg,
    /// Drop low-probability candidates until every degree is at most this
    #[arg(long)]
    cap_degree: Option<usize>,
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Communication budget
    #[arg(short = 'b', allow_negative_numbers = true)]
    b: f64,
    /// Verification budget
    #[arg(short = 'k')]
    k: usize,
    #[arg(long, value_enum, default_value_t = PlannerArg::Sgreedy)]
    planner: PlannerArg,
    #[arg(long)]
    lazy: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Plan file (JSON)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Selection trace (CSV)
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Exchange graph (JSON lines)
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    pose_graph: Option<PathBuf>,
    #[arg(long)]
    cap_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = CertifyArg::Lp)]
    certify: CertifyArg,
    /// Instance label for the CSV row
    #[arg(long)]
    instance: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certificate file (CSV); printed to stdout when absent
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepMode::Plans)]
    mode: SweepMode,
    /// Exchange graph (JSON lines); optional in alpha mode when --delta is given
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    pose_graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Modular)]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value_t = RegimeArg::Tu)]
    regime: RegimeArg,
    #[arg(long)]
    cap_degree: Option<usize>,
    /// Communication budgets: start:step:end, a comma list, or one value
    #[arg(short = 'b')]
    b: String,
    /// Verification budgets: start:step:end, a comma list, or one value
    #[arg(short = 'k')]
    k: String,
    /// Comma-separated planners (default: every planner the regime supports)
    #[arg(long, value_enum, value_delimiter = ',')]
    planner: Vec<PlannerArg>,
    #[arg(long, value_enum, default_value_t = CertifyArg::None)]
    certify: CertifyArg,
    #[arg(long)]
    lazy: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum degrees for alpha mode (comma list); defaults to the input's
    #[arg(long, value_delimiter = ',')]
    delta: Vec<usize>,
    /// Budget ratios b/k for the α̃ curves in alpha mode
    #[arg(long)]
    kappa: Option<String>,
    /// Output file for the α̃ curves
    #[arg(long)]
    tilde_output: Option<PathBuf>,
    #[arg(long, short)]
    output: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Plan(a) => plan_cmd(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
    }
}

fn generate(a: GenerateArgs) -> Result<()> {
    if !a.output.is_dir() {
        return Err(CliError::Core(loopclose::Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("output directory {} does not exist", a.output.display()),
        ))));
    }
    let edges = match (a.density, a.edges) {
        (Some(d), None) => EdgeCount::Density(d),
        (None, Some(m)) => EdgeCount::Exact(m),
        _ => return Err(usage("give exactly one of --density and --edges")),
    };
    let mut spec = GenSpec::new(a.robots, a.verts, edges, a.seed);
    spec.max_degree = a.cap_degree;
    spec.pose.chain_length = a.chain_length;
    if let Some(ps) = &a.probabilities {
        let list = ps
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("invalid probability list '{ps}'")))?;
        spec.probability = ProbabilityModel::Fixed(list);
    }
    if let Some(w) = &a.weights {
        let bad = || usage(format!("invalid weight range '{w}', expected lo:hi"));
        let (lo, hi) = w.split_once(':').ok_or_else(bad)?;
        spec.weights = WeightModel::Uniform {
            lo: lo.parse().map_err(|_| bad())?,
            hi: hi.parse().map_err(|_| bad())?,
        };
    }
    let graph = generate_exchange_graph(&spec)?;
    io::write_exchange_graph_file(a.output.join("graph.jsonl"), &graph)?;
    if a.pose_graph {
        let pg = generate_pose_graph(&spec, &graph)?;
        io::write_pose_graph_file(a.output.join("pose_graph.g2o"), &pg)?;
    }
    if a.ground_truth {
        let gt = sample_ground_truth(&graph, a.seed);
        let text = io::metadata_comment(&graph, a.seed, &[]) + &io::ground_truth_csv(&gt);
        fs::write(a.output.join("ground_truth.csv"), text)?;
    }
    println!(
        "robots={} vertices={} edges={} delta={}",
        graph.num_robots(),
        graph.num_vertices(),
        graph.num_edges(),
        graph.max_degree()
    );
    Ok(())
}

struct Instance {
    graph: Graph,
    poses: Option<PoseGraph>,
}

fn load_instance(input: &Path, pose_graph: Option<&Path>, cap: Option<usize>) -> Result<Instance> {
    let mut graph = in_file(input, io::read_exchange_graph(input))?;
    let mut poses = pose_graph.map(|p| in_file(p, io::read_pose_graph(p))).transpose()?;
    if let Some(cap) = cap {
        let capped = graph.cap_degree(cap)?;
        if let Some(pg) = &poses {
            // recover which original edge each kept edge came from
            let kept: Vec<EdgeId> = capped
                .edges()
                .iter()
                .map(|e| {
                    graph
                        .edges()
                        .iter()
                        .find(|o| o.u == e.u && o.v == e.v)
                        .map(|o| o.id)
                        .expect("capped edges come from the input")
                })
                .collect();
            poses = Some(pg.restrict(&kept)?);
        }
        graph = capped;
    }
    if let Some(pg) = &poses {
        pg.validate_for(&graph)?;
    }
    Ok(Instance { graph, poses })
}

fn plan_cmd(a: PlanArgs) -> Result<()> {
    let inst = load_instance(&a.instance.input, a.instance.pose_graph.as_deref(), a.instance.cap_degree)?;
    let g = &inst.graph;
    let objective = AnyObjective::build(a.instance.objective.into(), g, inst.poses.as_ref())?;
    let budget = CommBudget::uniform(a.instance.regime.into(), a.b, g)?;
    let kind: PlannerKind = a.planner.into();
    let config = PlannerConfig {
        k: a.k,
        budget: budget.clone(),
        lazy: a.lazy,
        seed: a.seed,
    };
    let (p, trace) = plan(kind, g, &objective, &config)?;
    if let Some(out) = &a.output {
        io::write_plan(out, &PlanFile::new(kind, objective.kind(), a.k, budget.clone(), &p))?;
    }
    if let Some(out) = &a.trace {
        let meta = io::metadata_comment(g, a.seed, &[("planner", kind.to_string()), ("k", a.k.to_string())]);
        fs::write(out, meta + &io::trace_csv(&trace))?;
    }
    let alpha = planner_guarantee(kind, &budget, a.k, g.max_degree());
    println!(
        "planner={} objective={} achieved={} vertices={} edges={} delta={} alpha_apriori={}",
        kind,
        objective.kind().name(),
        p.achieved_value,
        p.vertices.len(),
        p.edges.len(),
        g.max_degree(),
        io::opt_field(alpha)
    );
    Ok(())
}

fn certify_cmd(a: CertifyArgs) -> Result<()> {
    let inst = load_instance(&a.input, a.pose_graph.as_deref(), a.cap_degree)?;
    let g = &inst.graph;
    let pf = in_file(&a.plan, io::read_plan(&a.plan))?;
    let objective = AnyObjective::build(pf.objective, g, inst.poses.as_ref())?;
    let config = PlannerConfig {
        k: pf.k,
        budget: pf.budget.clone(),
        lazy: false,
        seed: a.seed,
    };
    let stored = pf.plan();
    g.check_vertices(&stored.vertices)?;
    g.check_edges(&stored.edges)?;
    // rerun the planner to recover its trace for the a-posteriori factors
    let trace = match plan(pf.planner, g, &objective, &config) {
        Ok((p, t)) if p.vertices == stored.vertices && p.edges == stored.edges => Some(t),
        _ => None,
    };
    let level: CertifyLevel = a.certify.into();
    let name = a
        .instance
        .clone()
        .unwrap_or_else(|| a.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    let cert = certify(&name, g, &objective, &config, pf.planner, &stored, trace.as_ref(), level).map_err(|e| {
        if e.is_guard() && level == CertifyLevel::Brute {
            eprintln!("hint: use --certify lp for an LP upper bound instead");
        }
        CliError::Core(e)
    })?;
    let meta = io::metadata_comment(g, a.seed, &[("planner", pf.planner.to_string()), ("certify", level.to_string())]);
    let text = meta + &io::certificate_header() + &io::certificate_row(&cert);
    match &a.output {
        Some(out) => fs::write(out, &text)?,
        None => print!("{text}"),
    }
    if let Some(r) = cert.ratio_lb {
        eprintln!("ratio_lb={r}");
    }
    Ok(())
}

fn sweep_cmd(a: SweepArgs) -> Result<()> {
    match a.mode {
        SweepMode::Alpha => sweep_alpha(a),
        SweepMode::Plans => sweep_plans(a),
    }
}

fn sweep_alpha(a: SweepArgs) -> Result<()> {
    let bs = parse_count_grid(&a.b)?;
    let ks = parse_count_grid(&a.k)?;
    let deltas = if a.delta.is_empty() {
        let input = a
            .input
            .as_deref()
            .ok_or_else(|| usage("alpha mode needs --delta or --input"))?;
        vec![load_instance(input, None, a.cap_degree)?.graph.max_degree()]
    } else {
        a.delta.clone()
    };
    let mut text = String::new();
    for &d in &deltas {
        let cells = alpha_heatmap(&bs, &ks, d)?;
        text.push_str(&alpha_heatmap_csv(&cells, d));
    }
    fs::write(&a.output, text)?;
    if let Some(kappa) = &a.kappa {
        let out = a
            .tilde_output
            .as_ref()
            .ok_or_else(|| usage("--kappa needs --tilde-output"))?;
        let kappas = parse_grid(kappa)?;
        if kappas.iter().any(|&k| k <= 0.0) {
            return Err(usage("budget ratios must be positive"));
        }
        fs::write(out, alpha_tilde_csv(&alpha_tilde_curves(&kappas, &deltas)))?;
    }
    Ok(())
}

fn sweep_plans(a: SweepArgs) -> Result<()> {
    let input = a.input.as_deref().ok_or_else(|| usage("sweep needs --input"))?;
    let inst = load_instance(input, a.pose_graph.as_deref(), a.cap_degree)?;
    let g = &inst.graph;
    let objective = AnyObjective::build(a.objective.into(), g, inst.poses.as_ref())?;
    let regime: Regime = a.regime.into();
    let planners: Vec<PlannerKind> = if a.planner.is_empty() {
        PlannerKind::ALL
            .into_iter()
            .filter(|p| p.supports(regime) && (*p != PlannerKind::MGreedy || objective.is_modular()))
            .collect()
    } else {
        a.planner.iter().map(|&p| p.into()).collect()
    };
    let spec = SweepSpec {
        regime,
        b_values: parse_grid(&a.b)?,
        k_values: parse_count_grid(&a.k)?,
        planners,
        certify: a.certify.into(),
        lazy: a.lazy,
        seed: a.seed,
    };
    let result = run_sweep(g, &objective, &spec)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    fs::write(&a.output, sweep_csv(&result, g, &spec))?;
    Ok(())
}
