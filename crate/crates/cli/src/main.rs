mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use bimim::builders::{
    build_adjusted_permutation, build_adjusted_rdpath, build_nice_hconvex, build_reflexive_hdigraph,
    build_reflexive_interval, BuilderReport,
};
use bimim::cut::Measure;
use bimim::decomposition::cut_profile;
use bimim::distance::{
    distance_dominates, is_distance_dq_partition, solve_distance_lcvp, solve_distance_sigma_rho, BallSemantics,
};
use bimim::lcvp::{catalog_lcvp, is_dq_partition, solve_lcvp, LcvpMatrix, LcvpOptions, LcvpParams};
use bimim::nbhd::enumerate_classes;
use bimim::oracle::{brute_lcvp, brute_sigma_rho, exact_bimimwidth, exact_linear_bimimwidth, OracleBudget};
use bimim::representations::{gen_grid_orientation, gen_p2_convex_grid, gen_tournament, is_reflexive, Representation};
use bimim::sigma_rho::{catalog_problem, dominates, solve_sigma_rho, Outcome, ProblemParams, SigmaRhoProblem, SolveOptions};
use bimim::{decomposition_width, random, BranchDecomposition, Digraph, Error, UndirectedGraph, VertexSet, FORMAT_VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use report::Report;

#[derive(Parser)]
#[command(name = "bimim", about = "Bi-mim-width decompositions and directed locally checkable problems", disable_version_flag = true)]
struct Cli {
    /// Print the file-format version and exit.
    #[arg(long, global = true)]
    version: bool,
    /// Emit one JSON object per result instead of `key value` lines.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a decomposition from a representation file.
    Build {
        class: BuildClass,
        rep: PathBuf,
        /// Also measure the exact width of the result.
        #[arg(long)]
        verify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Width of a decomposition.
    Width {
        digraph: PathBuf,
        bdecomp: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureArg::Bimim)]
        measure: MeasureArg,
        /// Print the values of every cut as well.
        #[arg(long)]
        per_cut: bool,
    },
    /// Solve a (σ⁺, σ⁻, ρ⁺, ρ⁻) problem given as a file or a catalog name.
    Solve {
        digraph: PathBuf,
        bdecomp: PathBuf,
        problem: String,
        #[command(flatten)]
        params: SigmaRhoArgs,
        #[command(flatten)]
        dist: DistanceArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Decide a vertex-partition problem given as a file or a catalog name.
    Partition {
        digraph: PathBuf,
        bdecomp: PathBuf,
        problem: String,
        #[command(flatten)]
        params: LcvpArgs,
        #[command(flatten)]
        dist: DistanceArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Number of neighbourhood classes on both sides of a cut.
    Nec { digraph: PathBuf, cutset: PathBuf, d: usize },
    /// Generate an instance.
    Gen {
        family: Family,
        n: usize,
        /// Edge probability for random digraphs.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive reference computations.
    Oracle {
        #[command(subcommand)]
        task: OracleTask,
    },
    /// Validate a representation file and report its properties.
    Check { rep: PathBuf },
    /// Write the digraph realised by a representation file.
    Realize {
        rep: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleTask {
    Solve {
        digraph: PathBuf,
        problem: String,
        #[command(flatten)]
        params: SigmaRhoArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    Partition {
        digraph: PathBuf,
        problem: String,
        #[command(flatten)]
        params: LcvpArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    Width {
        digraph: PathBuf,
        /// Minimise over vertex orders only.
        #[arg(long)]
        linear: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct SigmaRhoArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
}

#[derive(Args)]
struct LcvpArgs {
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// Digraph file of the target for `h-homomorphism`.
    #[arg(long)]
    host: Option<PathBuf>,
    /// Catalog name of the subset problem for `exists-sigma-rho`.
    #[arg(long)]
    subset_problem: Option<String>,
}

#[derive(Args)]
struct DistanceArgs {
    /// Count neighbours within directed distance `r`.
    #[arg(long)]
    distance: Option<usize>,
    /// Re-check the witness with balls that always contain their centre.
    #[arg(long)]
    strict_balls: bool,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 8)]
    max_vertices: usize,
    #[arg(long, default_value_t = 6)]
    max_leaves: usize,
    #[arg(long)]
    timeout_ms: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_vertices: self.max_vertices,
            max_leaves: self.max_leaves,
            timeout: self.timeout_ms.map(Duration::from_millis),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildClass {
    ReflexiveInterval,
    AdjustedPermutation,
    AdjustedRdpath,
    ReflexiveHdigraph,
    NiceHconvex,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Bimim,
    Birank,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    GridOrientation,
    Tournament,
    P2ConvexGrid,
    RandomDigraph,
    RandomBdecomp,
    ReflexiveInterval,
    AdjustedPermutation,
    AdjustedRdpath,
    ReflexiveHdigraph,
    NiceHconvex,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::BudgetExceeded(_)) { 3 } else { 1 };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

type Run = std::result::Result<u8, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_digraph(path: &Path) -> std::result::Result<Digraph, Failure> {
    Ok(Digraph::from_text(&read(path)?)?)
}

fn load_pair(g: &Path, bd: &Path) -> std::result::Result<(Digraph, BranchDecomposition), Failure> {
    let g = load_digraph(g)?;
    let bd = BranchDecomposition::from_text(&read(bd)?)?;
    bd.check_for(&g)?;
    Ok((g, bd))
}

/// A problem argument is a file when one exists at that path, otherwise a
/// catalog name.
fn sigma_rho_problem(arg: &str, params: &SigmaRhoArgs) -> std::result::Result<SigmaRhoProblem, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(SigmaRhoProblem::from_text(&read(path)?)?);
    }
    Ok(catalog_problem(arg, ProblemParams { k: params.k, l: params.l })?)
}

fn lcvp_problem(arg: &str, params: &LcvpArgs) -> std::result::Result<LcvpMatrix, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(LcvpMatrix::from_text(&read(path)?)?);
    }
    let host = params.host.as_deref().map(load_digraph).transpose()?;
    let sigma_rho = params
        .subset_problem
        .as_deref()
        .map(|name| catalog_problem(name, ProblemParams::default()))
        .transpose()?;
    Ok(catalog_lcvp(arg, &LcvpParams { k1: params.k1, k2: params.k2, host, sigma_rho })?)
}

fn set_of(n: usize, vs: &[usize]) -> VertexSet {
    VertexSet::from_iter_with_capacity(n, vs.iter().copied())
}

fn semantics(strict: bool) -> BallSemantics {
    if strict {
        BallSemantics::Strict
    } else {
        BallSemantics::Power
    }
}

fn outcome_fields(rec: &mut serde_json::Map<String, Value>, outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Optimum(k) => {
            rec.insert("value".into(), json!(k));
            0
        }
        Outcome::Feasible => {
            rec.insert("feasible".into(), json!(true));
            0
        }
        Outcome::Infeasible => {
            rec.insert("infeasible".into(), json!(true));
            2
        }
    }
}

fn cmd_build(report: &mut Report, class: BuildClass, rep: &Path, verify: bool, output: &Option<PathBuf>, parallel: bool) -> Run {
    let parsed = Representation::from_text(&read(rep)?)?;
    let wrong = || usage(format!("{} file given for a different builder", parsed.kind()));
    let built: BuilderReport = match (class, &parsed) {
        (BuildClass::ReflexiveInterval, Representation::Interval(r)) => build_reflexive_interval(r)?,
        (BuildClass::AdjustedPermutation, Representation::Permutation(r)) => build_adjusted_permutation(r)?,
        (BuildClass::AdjustedRdpath, Representation::RootedDirPath(r)) => build_adjusted_rdpath(r)?,
        (BuildClass::ReflexiveHdigraph, Representation::HDigraph(r)) => build_reflexive_hdigraph(r)?,
        (BuildClass::NiceHconvex, Representation::HConvex(r)) => build_nice_hconvex(r)?,
        _ => return Err(wrong()),
    };
    let built = if verify { built.verify(&parsed.realize()?, parallel)? } else { built };
    match output {
        Some(_) => {
            write_or_print(output, &built.to_text())?;
            let rec = report.record();
            rec.insert("guarantee".into(), json!(built.guarantee));
            if let Some(m) = built.measured {
                rec.insert("measured".into(), json!(m));
            }
        }
        None => write_or_print(output, &built.to_text())?,
    }
    Ok(0)
}

fn cmd_width(report: &mut Report, g: &Path, bd: &Path, measure: MeasureArg, per_cut: bool, parallel: bool) -> Run {
    let (g, bd) = load_pair(g, bd)?;
    let m = match measure {
        MeasureArg::Bimim => Measure::BiMim,
        MeasureArg::Birank => Measure::BiRank,
    };
    if per_cut {
        let profile = cut_profile(&g, &bd, matches!(measure, MeasureArg::Birank), parallel)?;
        for (i, (cv, &(x, y))) in profile.iter().zip(bd.tree_edges()).enumerate() {
            let rec = report.record();
            rec.insert("cut".into(), json!(i));
            rec.insert("tree_edge".into(), json!([x, y]));
            rec.insert("mim_plus".into(), json!(cv.mim_plus));
            rec.insert("mim_minus".into(), json!(cv.mim_minus));
            rec.insert("bimim".into(), json!(cv.bimim));
            if let Some(r) = cv.bicutrk {
                rec.insert("birank".into(), json!(r));
            }
        }
    }
    let w = decomposition_width(&g, &bd, m, parallel)?;
    report.record().insert("width".into(), json!(w));
    Ok(0)
}

fn cmd_solve(
    report: &mut Report,
    (g, bd, problem): (&Path, &Path, &str),
    params: &SigmaRhoArgs,
    dist: &DistanceArgs,
    witness: bool,
    parallel: bool,
) -> Run {
    let (g, bd) = load_pair(g, bd)?;
    let prob = sigma_rho_problem(problem, params)?;
    let opts = SolveOptions { parallel, witness };
    let sol = match dist.distance {
        Some(r) => solve_distance_sigma_rho(&g, &bd, r, &prob, opts)?,
        None => solve_sigma_rho(&g, &bd, &prob, opts)?,
    };
    let rec = report.record();
    let code = outcome_fields(rec, sol.outcome);
    if let Some(w) = &sol.witness {
        rec.insert("witness".into(), json!(w));
        let set = set_of(g.n(), w);
        let ok = match dist.distance {
            Some(r) => distance_dominates(&g, &set, r, &prob, semantics(dist.strict_balls))?,
            None => dominates(&g, &set, &prob),
        };
        rec.insert("check".into(), json!(if ok { "ok" } else { "fail" }));
    }
    rec.insert("max_nec".into(), json!(sol.stats.max_nec()));
    Ok(code)
}

fn cmd_partition(
    report: &mut Report,
    (g, bd, problem): (&Path, &Path, &str),
    params: &LcvpArgs,
    dist: &DistanceArgs,
    witness: bool,
    parallel: bool,
) -> Run {
    let (g, bd) = load_pair(g, bd)?;
    let dq = lcvp_problem(problem, params)?;
    let opts = LcvpOptions { parallel, witness };
    let sol = match dist.distance {
        Some(r) => solve_distance_lcvp(&g, &bd, r, &dq, opts)?,
        None => solve_lcvp(&g, &bd, &dq, opts)?,
    };
    let rec = report.record();
    rec.insert("exists".into(), json!(sol.exists));
    if let Some(parts) = &sol.witness {
        for (i, p) in parts.iter().enumerate() {
            rec.insert(format!("part{}", i + 1), json!(p));
        }
        let sets: Vec<VertexSet> = parts.iter().map(|p| set_of(g.n(), p)).collect();
        let ok = match dist.distance {
            Some(r) => is_distance_dq_partition(&g, &sets, r, &dq, semantics(dist.strict_balls))?,
            None => is_dq_partition(&g, &sets, &dq)?,
        };
        rec.insert("check".into(), json!(if ok { "ok" } else { "fail" }));
    }
    rec.insert("max_nec".into(), json!(sol.stats.max_nec()));
    Ok(if sol.exists { 0 } else { 2 })
}

/// Cut files list the vertices of one side on `side` lines; `#` comments.
fn parse_cutset(src: &str, n: usize) -> std::result::Result<VertexSet, Failure> {
    let mut side = VertexSet::new(n);
    for (no, line) in src.lines().enumerate() {
        let mut toks = line.split_whitespace();
        match toks.next() {
            None => {}
            Some(t) if t.starts_with('#') => {}
            Some("side") => {
                for t in toks {
                    let v: usize = t.parse().map_err(|_| usage(format!("line {}: bad vertex `{t}`", no + 1)))?;
                    if v >= n {
                        return Err(usage(format!("line {}: vertex {v} out of range", no + 1)));
                    }
                    side.insert(v);
                }
            }
            Some(other) => return Err(usage(format!("line {}: unexpected `{other}`", no + 1))),
        }
    }
    Ok(side)
}

fn cmd_nec(report: &mut Report, g: &Path, cutset: &Path, d: usize) -> Run {
    let g = load_digraph(g)?;
    let side = parse_cutset(&read(cutset)?, g.n())?;
    let inside = enumerate_classes(&g, &side, d)?.len();
    let outside = enumerate_classes(&g, &side.complement(), d)?.len();
    let rec = report.record();
    rec.insert("nec".into(), json!(inside));
    rec.insert("nec_complement".into(), json!(outside));
    Ok(0)
}

fn cmd_gen(family: Family, n: usize, p: f64, seed: u64, output: &Option<PathBuf>) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 3 * n as i64 + 1;
    let c3 = UndirectedGraph::cycle(3);
    let text = match family {
        Family::GridOrientation => gen_grid_orientation(n)?.0.to_text(),
        Family::Tournament => gen_tournament(n)?.to_text(),
        Family::P2ConvexGrid => gen_p2_convex_grid(n)?.to_text(),
        Family::RandomDigraph => {
            if !(0.0..=1.0).contains(&p) {
                return Err(usage("edge probability must lie in [0, 1]"));
            }
            random::digraph(&mut rng, n, p, true).to_text()
        }
        Family::RandomBdecomp => random::decomposition(&mut rng, n).to_text(),
        Family::ReflexiveInterval => random::reflexive_interval(&mut rng, n, span, 4).to_text(),
        Family::AdjustedPermutation => random::adjusted_permutation(&mut rng, n, span).to_text(),
        Family::AdjustedRdpath => random::adjusted_rdpath(&mut rng, n, n.max(1)).to_text(),
        Family::ReflexiveHdigraph => random::reflexive_hdigraph(&mut rng, &c3, n, 3, 4).to_text(),
        Family::NiceHconvex => random::nice_hconvex(&mut rng, &c3, n, 3, 4).to_text(),
    };
    write_or_print(output, &text)?;
    Ok(0)
}

fn cmd_oracle(report: &mut Report, task: &OracleTask) -> Run {
    match task {
        OracleTask::Solve { digraph, problem, params, budget } => {
            let g = load_digraph(digraph)?;
            let prob = sigma_rho_problem(problem, params)?;
            let (outcome, witness) = brute_sigma_rho(&g, &prob, &budget.budget())?;
            let rec = report.record();
            let code = outcome_fields(rec, outcome);
            if let Some(w) = witness {
                rec.insert("witness".into(), json!(w));
            }
            Ok(code)
        }
        OracleTask::Partition { digraph, problem, params, budget } => {
            let g = load_digraph(digraph)?;
            let dq = lcvp_problem(problem, params)?;
            let found = brute_lcvp(&g, &dq, &budget.budget())?;
            let rec = report.record();
            rec.insert("exists".into(), json!(found.is_some()));
            for (i, p) in found.iter().flatten().enumerate() {
                rec.insert(format!("part{}", i + 1), json!(p));
            }
            Ok(if found.is_some() { 0 } else { 2 })
        }
        OracleTask::Width { digraph, linear, budget } => {
            let g = load_digraph(digraph)?;
            let w = if *linear {
                exact_linear_bimimwidth(&g, &budget.budget())?
            } else {
                exact_bimimwidth(&g, &budget.budget())?
            };
            report.record().insert("width".into(), json!(w));
            Ok(0)
        }
    }
}

/// `k` when the underlying graph is exactly the `k × k` grid.
fn grid_side(g: &Digraph) -> Option<usize> {
    let k = (g.n() as f64).sqrt().round() as usize;
    (k >= 1 && k * k == g.n() && g.underlying() == UndirectedGraph::grid(k, k)).then_some(k)
}

fn cmd_check(report: &mut Report, rep: &Path) -> Run {
    let parsed = Representation::from_text(&read(rep)?)?;
    let g = parsed.realize()?;
    let rec = report.record();
    rec.insert("kind".into(), json!(parsed.kind()));
    rec.insert("vertices".into(), json!(g.n()));
    rec.insert("edges".into(), json!(g.edge_count()));
    rec.insert("reflexive".into(), json!(is_reflexive(&g)));
    match &parsed {
        Representation::Permutation(r) => {
            rec.insert("adjusted".into(), json!(r.is_adjusted()));
        }
        Representation::RootedDirPath(r) => {
            rec.insert("adjusted".into(), json!(r.is_adjusted()));
        }
        Representation::HConvex(r) => {
            rec.insert("nice".into(), json!(r.is_nice()));
            // The A side carries no loops, so report reflexivity of B only.
            let a = r.a_count();
            rec.insert("reflexive".into(), json!((a..g.n()).all(|v| g.has_edge(v, v))));
        }
        _ => {}
    }
    let underlying = match grid_side(&g) {
        Some(k) => format!("grid {k}x{k}"),
        None => "other".into(),
    };
    rec.insert("underlying".into(), json!(underlying));
    Ok(0)
}

fn run(cli: &Cli, report: &mut Report) -> Run {
    let parallel = cli.threads > 1;
    let Some(command) = &cli.command else {
        return Err(usage("no subcommand given; see --help"));
    };
    match command {
        Command::Build { class, rep, verify, output } => cmd_build(report, *class, rep, *verify, output, parallel),
        Command::Width { digraph, bdecomp, measure, per_cut } => {
            cmd_width(report, digraph, bdecomp, *measure, *per_cut, parallel)
        }
        Command::Solve { digraph, bdecomp, problem, params, dist, witness } => {
            cmd_solve(report, (digraph, bdecomp, problem), params, dist, *witness, parallel)
        }
        Command::Partition { digraph, bdecomp, problem, params, dist, witness } => {
            cmd_partition(report, (digraph, bdecomp, problem), params, dist, *witness, parallel)
        }
        Command::Nec { digraph, cutset, d } => cmd_nec(report, digraph, cutset, *d),
        Command::Gen { family, n, p, output } => cmd_gen(*family, *n, *p, cli.seed, output),
        Command::Oracle { task } => cmd_oracle(report, task),
        Command::Check { rep } => cmd_check(report, rep),
        Command::Realize { rep, output } => {
            let g = Representation::from_text(&read(rep)?)?.realize()?;
            write_or_print(output, &g.to_text())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.version {
        println!("{FORMAT_VERSION}");
        return ExitCode::SUCCESS;
    }
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(1);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let mut report = Report::default();
    let outcome = run(&cli, &mut report);
    report.print(cli.json);
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
