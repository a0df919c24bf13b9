//! Command-line driver. Machine output (JSON or CSV) goes to `--output` or
//! standard output; the human summary goes to whichever stream is left.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::generators::DEFAULT_VERTEX_BUDGET;
use crate::graph::Graph;
use crate::growth::measure_growth;
use crate::io::{read_graph, write_expanded, write_json, write_text};
use crate::isoperimetry::iso_report;
use crate::profile::DegreeProfile;
use crate::spectral::{eigen_ratios, eigenvalues_seeded, BoundaryCondition, LaplacianOperator, Solver};
use crate::stochastic::{build_certificate_scaled, heat_mass};
use crate::verify::{summary_line, verify_all, Family, Status, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "rapidbranch", version, about = "Spectral, isoperimetric, growth and incompleteness checks on rapidly branching graphs")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "RB_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated truncation in the graph file format.
    Generate(GenerateArgs),
    /// Laplacian eigenvalues with the degree ratios `λ_k / d_k`.
    Spectrum(SpectrumArgs),
    /// Isoperimetric constant by connected-subset search.
    Iso(IsoArgs),
    /// Ball volumes and growth rates around a vertex.
    Growth(GrowthArgs),
    /// Build and evaluate the λ-subharmonic certificate.
    Incomplete(IncompleteArgs),
    /// Heat-flow mass on the Dirichlet truncation.
    Heat(HeatArgs),
    /// Run every check on a generated truncation.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    Block,
    Antitree,
    Path,
    Complete,
    Tree,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Rate of the block family.
    #[arg(long)]
    pub s: Option<f64>,
    /// Sphere growth factor of the antitree.
    #[arg(long)]
    pub sigma: Option<u64>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Vertex count of path and complete graphs.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub branching: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        fn need<T>(v: Option<T>, name: &str) -> Result<T> {
            v.ok_or_else(|| Error::Usage(format!("--{name} is required for this family")))
        }
        Ok(match self.family {
            FamilyName::Block => Family::Block { s: need(self.s, "s")?, depth: need(self.depth, "depth")? },
            FamilyName::Antitree => Family::Antitree { sigma: need(self.sigma, "sigma")?, depth: need(self.depth, "depth")? },
            FamilyName::Path => Family::Path { n: need(self.n, "n")? },
            FamilyName::Complete => Family::Complete { n: need(self.n, "n")? },
            FamilyName::Tree => Family::Tree { branching: need(self.branching, "branching")?, depth: need(self.depth, "depth")? },
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: GraphFormat,
    /// Write every edge explicitly instead of clique blocks and joins.
    #[arg(long)]
    pub expand: bool,
    /// Refuse to expand graphs with more edges than this.
    #[arg(long, default_value_t = 50_000_000)]
    pub max_edges: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value = "dirichlet")]
    pub bc: BoundaryCondition,
    /// Number of eigenvalues (default: all).
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverName,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write a gnuplot script plotting the output table.
    #[arg(long)]
    pub gnuplot_script: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverName {
    Auto,
    Dense,
    Reduced,
    Lanczos,
}

impl From<SolverName> for Solver {
    fn from(s: SolverName) -> Self {
        match s {
            SolverName::Auto => Solver::Auto,
            SolverName::Dense => Solver::Dense,
            SolverName::Reduced => Solver::Reduced,
            SolverName::Lanczos => Solver::Lanczos,
        }
    }
}

#[derive(Args, Debug)]
pub struct IsoArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub max_size: usize,
    /// Only subsets of the reliable core.
    #[arg(long)]
    pub core_only: bool,
    /// Also search after removing this many lowest-degree core vertices.
    #[arg(long, default_value_t = 0)]
    pub exclude: usize,
    /// Scan the generations of a labelled block-family graph at this rate.
    #[arg(long)]
    pub block_s: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub out: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long)]
    pub nmax: usize,
    /// Rate for the bound (default: the r∞ estimate of the core).
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub gnuplot_script: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IncompleteArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub s: f64,
    /// Factor in (0, 1] applied to the extreme λ.
    #[arg(long, default_value_t = 1.0)]
    pub slack: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HeatArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub gnuplot_script: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Rate for the incompleteness certificate.
    #[arg(long)]
    pub cert_s: Option<f64>,
    #[arg(long, default_value_t = 6)]
    pub iso_max_size: usize,
    #[arg(long, default_value_t = 64)]
    pub iso_core_limit: usize,
    #[arg(long, default_value_t = 200)]
    pub form_trials: usize,
    #[arg(long, default_value_t = 1.0)]
    pub heat_t: f64,
    #[arg(long, default_value_t = 64)]
    pub heat_steps: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Parses the process arguments, runs the command and returns the exit code:
/// `0` when every check passes, `1` on a failed check, `2` on usage or I/O errors.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Spectrum(a) => spectrum(a, cli.seed),
        Command::Iso(a) => iso(a),
        Command::Growth(a) => growth(a),
        Command::Incomplete(a) => incomplete(a),
        Command::Heat(a) => heat(a),
        Command::Verify(a) => verify(a, cli.seed),
    }
}

struct Sink {
    to_file: bool,
    out: Box<dyn Write>,
}

impl Sink {
    fn open(path: Option<&Path>) -> Result<Self> {
        Ok(match path {
            Some(p) => Sink { to_file: true, out: Box::new(BufWriter::new(File::create(p)?)) },
            None => Sink { to_file: false, out: Box::new(BufWriter::new(io::stdout())) },
        })
    }

    /// Human-readable line on the stream not used for data.
    fn say(&self, line: &str) {
        if self.to_file {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn load(path: &Path) -> Result<Graph> {
    read_graph(path)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}

fn header(out: &mut dyn Write, pairs: &[(&str, String)]) -> Result<()> {
    for (k, v) in pairs {
        writeln!(out, "# {k}={v}")?;
    }
    Ok(())
}

fn gnuplot(script: &Path, data: Option<&Path>, title: &str, xcol: usize, ycols: &[(usize, &str)], logscale_y: bool) -> Result<()> {
    let data = data.ok_or_else(|| Error::Usage("--gnuplot-script needs --output".into()))?;
    let mut f = BufWriter::new(File::create(script)?);
    writeln!(f, "set datafile separator ','")?;
    writeln!(f, "set key autotitle columnhead")?;
    writeln!(f, "set title '{title}'")?;
    if logscale_y {
        writeln!(f, "set logscale y")?;
    }
    let plots: Vec<String> =
        ycols.iter().map(|(c, name)| format!("'{}' using {xcol}:{c} with linespoints title '{name}'", data.display())).collect();
    writeln!(f, "plot {}", plots.join(", \\\n     "))?;
    f.flush()?;
    Ok(())
}

fn generate(a: &GenerateArgs) -> Result<i32> {
    let family = a.family.family()?;
    let g = family.generate(a.family.budget)?;
    let mut sink = Sink::open(a.output.as_deref())?;
    match (a.format, a.expand) {
        (GraphFormat::Json, _) => write_json(&g, &mut sink.out)?,
        (GraphFormat::Text, true) => write_expanded(&g, &mut sink.out, a.max_edges)?,
        (GraphFormat::Text, false) => write_text(&g, &mut sink.out)?,
    }
    sink.out.flush()?;
    sink.say(&format!("{} vertices, {} edges, core {}", g.vertex_count(), g.edge_count(), g.core_size()));
    Ok(0)
}

fn spectrum(a: &SpectrumArgs, seed: u64) -> Result<i32> {
    let g = load(&a.graph)?;
    let op = LaplacianOperator::assemble(&g, a.bc)?;
    let spec = eigenvalues_seeded(&op, a.count, a.solver.into(), seed)?;
    let profile = match a.bc {
        BoundaryCondition::Dirichlet => DegreeProfile::from_graph(&g),
        BoundaryCondition::Neumann => DegreeProfile::from_degrees(g.degrees().to_vec()),
    };
    let ratios = eigen_ratios(&spec, &profile)?;
    let mut sink = Sink::open(a.output.as_deref())?;
    match a.out {
        TableFormat::Csv => {
            header(
                &mut sink.out,
                &[
                    ("graph", a.graph.display().to_string()),
                    ("bc", format!("{:?}", a.bc).to_lowercase()),
                    ("solver", format!("{:?}", spec.solver).to_lowercase()),
                    ("tolerance", spec.solver_tolerance.to_string()),
                    ("seed", seed.to_string()),
                ],
            )?;
            writeln!(sink.out, "k,lambda_k,d_k,ratio")?;
            for (k, (l, r)) in spec.eigenvalues.iter().zip(&ratios).enumerate() {
                writeln!(sink.out, "{k},{l},{},{r}", profile.degrees()[k])?;
            }
        }
        TableFormat::Json => {
            let doc = json!({
                "graph": a.graph.display().to_string(),
                "seed": seed,
                "spectrum": spec,
                "degrees": &profile.degrees()[..spec.eigenvalues.len()],
                "ratios": ratios,
            });
            serde_json::to_writer_pretty(&mut sink.out, &doc)?;
            writeln!(sink.out)?;
        }
    }
    sink.out.flush()?;
    if let Some(script) = &a.gnuplot_script {
        gnuplot(script, a.output.as_deref(), "lambda_k and d_k", 1, &[(2, "lambda_k"), (3, "d_k")], true)?;
    }
    sink.say(&format!("{} eigenvalues, lambda_0 = {}", spec.eigenvalues.len(), spec.lambda0()));
    Ok(0)
}

fn iso(a: &IsoArgs) -> Result<i32> {
    let g = load(&a.graph)?;
    let report = iso_report(&g, a.max_size, a.core_only, a.exclude, a.block_s)?;
    let mut sink = Sink::open(a.output.as_deref())?;
    match a.out {
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut sink.out, &json!({ "graph": a.graph.display().to_string(), "report": report }))?;
            writeln!(sink.out)?;
        }
        TableFormat::Csv => {
            header(&mut sink.out, &[("graph", a.graph.display().to_string()), ("alpha_bruteforce", opt(report.alpha_bruteforce))])?;
            writeln!(sink.out, "n,size,volume,boundary,ratio,bound,within_bound")?;
            for b in &report.block_ratios {
                writeln!(sink.out, "{},{},{},{},{},{},{}", b.n, b.size, b.volume, b.boundary, b.ratio, b.bound, b.within_bound)?;
            }
        }
    }
    sink.out.flush()?;
    let mut code = 0;
    if let (Some(alpha), Some(bound)) = (report.alpha_bruteforce, report.alpha_lower_bound_r) {
        if alpha < bound - 1e-9 {
            code = 1;
        }
    }
    if report.block_ratios.iter().any(|b| !b.within_bound) {
        code = 1;
    }
    sink.say(&format!(
        "alpha = {} over {} sets, lower bound {}",
        opt(report.alpha_bruteforce),
        report.sets_evaluated,
        opt(report.alpha_lower_bound_r)
    ));
    Ok(code)
}

fn growth(a: &GrowthArgs) -> Result<i32> {
    let g = load(&a.graph)?;
    let est = measure_growth(&g, a.root, a.nmax, a.s)?;
    let mut sink = Sink::open(a.output.as_deref())?;
    match a.out {
        TableFormat::Csv => {
            header(
                &mut sink.out,
                &[
                    ("graph", a.graph.display().to_string()),
                    ("root", a.root.to_string()),
                    ("s", est.s.to_string()),
                    ("a_s", opt(est.a_s)),
                    ("bound", opt(est.bound)),
                ],
            )?;
            writeln!(sink.out, "n,ball_size,ball_volume,rate")?;
            for n in 0..=a.nmax {
                let rate = if n == 0 { String::new() } else { est.rate_samples[n - 1].to_string() };
                writeln!(sink.out, "{n},{},{},{rate}", est.ball_sizes[n], est.ball_volumes[n])?;
            }
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut sink.out, &est)?;
            writeln!(sink.out)?;
        }
    }
    sink.out.flush()?;
    if let Some(script) = &a.gnuplot_script {
        gnuplot(script, a.output.as_deref(), "(1/n) log vol B_n", 1, &[(4, "rate")], false)?;
    }
    sink.say(&format!("vol(B_{}) = {}, bound 2 log a = {}", a.nmax, est.ball_volumes[a.nmax], opt(est.bound)));
    Ok(0)
}

fn incomplete(a: &IncompleteArgs) -> Result<i32> {
    let g = load(&a.graph)?;
    let cert = build_certificate_scaled(&g, a.s, a.slack)?;
    let doc = json!({
        "graph": a.graph.display().to_string(),
        "s": cert.s,
        "slack": a.slack,
        "p": cert.p,
        "lambda": cert.lambda,
        "n": cert.n,
        "K_size": cert.k_set.len(),
        "evaluable_count": cert.evaluable_count,
        "worst_defect": cert.worst_defect,
        "worst_vertex": cert.worst_vertex,
        "unverifiable_count": cert.unverifiable_count,
        "chain_worst_slack": cert.chain_worst_slack,
        "recipe_p_slack": cert.recipe_p_slack,
        "recipe_lambda_slack": cert.recipe_lambda_slack,
        "holds": cert.holds(1e-9),
    });
    let mut sink = Sink::open(a.output.as_deref())?;
    serde_json::to_writer_pretty(&mut sink.out, &doc)?;
    writeln!(sink.out)?;
    sink.out.flush()?;
    sink.say(&format!("worst defect {} over {} vertices", cert.worst_defect, cert.evaluable_count));
    Ok(if cert.holds(1e-9) { 0 } else { 1 })
}

fn heat(a: &HeatArgs) -> Result<i32> {
    let g = load(&a.graph)?;
    let curve = heat_mass(&g, a.t, a.steps)?;
    let mut sink = Sink::open(a.output.as_deref())?;
    match a.out {
        TableFormat::Csv => {
            header(
                &mut sink.out,
                &[
                    ("graph", a.graph.display().to_string()),
                    ("t", a.t.to_string()),
                    ("steps", a.steps.to_string()),
                    ("solver", format!("{:?}", curve.solver).to_lowercase()),
                ],
            )?;
            writeln!(sink.out, "t,mass")?;
            for (t, m) in curve.times.iter().zip(&curve.mass) {
                writeln!(sink.out, "{t},{m}")?;
            }
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut sink.out, &curve)?;
            writeln!(sink.out)?;
        }
    }
    sink.out.flush()?;
    if let Some(script) = &a.gnuplot_script {
        gnuplot(script, a.output.as_deref(), "heat mass", 1, &[(2, "mass")], false)?;
    }
    let end = curve.mass.last().copied().unwrap_or(f64::NAN);
    sink.say(&format!("mass {} -> {end} (heuristic: absorbing truncation boundary)", curve.mass[0]));
    Ok(if curve.worst_increase() <= 1e-9 { 0 } else { 1 })
}

fn verify(a: &VerifyArgs, seed: u64) -> Result<i32> {
    let mut config = VerifyConfig::new(a.family.family()?);
    config.budget = a.family.budget;
    config.seed = seed;
    config.certificate_s = a.cert_s;
    config.iso_max_size = a.iso_max_size;
    config.iso_core_limit = a.iso_core_limit;
    config.form_trials = a.form_trials;
    config.heat_t = a.heat_t;
    config.heat_steps = a.heat_steps;
    let report = verify_all(&config)?;
    let mut sink = Sink::open(a.output.as_deref())?;
    writeln!(sink.out, "{}", report.to_json()?)?;
    sink.out.flush()?;
    for check in &report.checks {
        sink.say(&summary_line(check));
    }
    sink.say(&format!(
        "{} pass, {} fail, {} flagged, {} void",
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Flagged),
        report.count(Status::Void)
    ));
    Ok(report.exit_code())
}
