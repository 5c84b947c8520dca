//! The `pcst` command line. [`run`] is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcst_core::pipeline::{p3, P3Config};
use pcst_core::verify::{exact_pcst, validate_solution};
use pcst_core::{net_cost, Graph};

use crate::bench::{run_bench, BenchOptions};
use crate::generate::{generate_instance, GeneratorParams};
use crate::solve::{solve, Algorithm, PostMode, SolveOptions, SolveReport};
use crate::stp::{format_sig9, parse_solution, parse_stp, write_graph, write_solution};

#[derive(Parser, Debug)]
#[command(name = "pcst", version, about = "Prize-collecting Steiner tree heuristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance with MSTG or FGW′ and optional post-processing.
    Solve(SolveArgs),
    /// Run the post-processing loop on an existing solution.
    Postprocess(PostprocessArgs),
    /// Write a random connected instance.
    Generate(GenerateArgs),
    /// Check a solution against its instance.
    Verify(VerifyArgs),
    /// Time solvers over a set of instance files.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

fn parse_s(raw: &str) -> Result<f64, String> {
    match raw.parse::<f64>() {
        Ok(s) if s >= 1.0 && s.is_finite() => Ok(s),
        _ => Err(format!("expected a real number >= 1, got {raw:?}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Mu(Option<f64>);

fn parse_mu(raw: &str) -> Result<Mu, String> {
    if raw == "auto" {
        return Ok(Mu(None));
    }
    match raw.parse::<f64>() {
        Ok(mu) if mu >= 0.0 && mu.is_finite() => Ok(Mu(Some(mu))),
        _ => Err(format!("expected 'auto' or a nonnegative real, got {raw:?}")),
    }
}

fn parse_range(raw: &str) -> Result<(f64, f64), String> {
    let err = || format!("expected lo:hi, got {raw:?}");
    let (lo, hi) = raw.split_once(':').ok_or_else(err)?;
    Ok((lo.trim().parse().map_err(|_| err())?, hi.trim().parse().map_err(|_| err())?))
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algorithm,
    /// Edge splitting ratio.
    #[arg(long, default_value = "2", value_parser = parse_s)]
    s: f64,
    /// Merge tolerance, or `auto` for 1e-9 times the largest edge cost.
    #[arg(long, default_value = "auto", value_parser = parse_mu)]
    mu: Mu,
    #[arg(long, value_enum, default_value = "p3")]
    post: PostMode,
    /// Path length bound for tree growing (default 1 above 10^5 vertices, else 2).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
    #[arg(short = 'i', value_name = "INSTANCE")]
    input: PathBuf,
    #[arg(short = 'o', value_name = "SOLUTION")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PostprocessArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(short = 'i', value_name = "INSTANCE")]
    input: PathBuf,
    #[arg(short = 't', value_name = "SOLUTION")]
    tree: PathBuf,
    #[arg(short = 'o', value_name = "SOLUTION")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long = "prized-frac", default_value_t = 1.0)]
    prized_frac: f64,
    #[arg(long = "prize-range", default_value = "1:100", value_parser = parse_range)]
    prize_range: (f64, f64),
    #[arg(long = "cost-range", default_value = "1:100", value_parser = parse_range)]
    cost_range: (f64, f64),
    #[arg(long)]
    seed: u64,
    #[arg(short = 'o', value_name = "INSTANCE")]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short = 'i', value_name = "INSTANCE")]
    input: PathBuf,
    #[arg(short = 't', value_name = "SOLUTION")]
    tree: PathBuf,
    /// Also compute the exact optimum (small instances only).
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', value_enum, required = true)]
    algos: Vec<Algorithm>,
    /// Glob pattern for instance files.
    #[arg(long)]
    instances: String,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    repeat: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
    #[arg(long, value_enum, default_value = "p3")]
    post: PostMode,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[arg(long, default_value = "2", value_parser = parse_s)]
    s: f64,
}

/// Error with the file it came from.
#[derive(Debug)]
pub(crate) struct Failure(pub String);

impl Failure {
    fn at(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure(format!("{}: {e}", path.display()))
    }
}

pub(crate) fn read_instance(path: &Path) -> Result<Graph, Failure> {
    let file = File::open(path).map_err(|e| Failure::at(path, e))?;
    parse_stp(BufReader::new(file)).map_err(|e| Failure::at(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::at(path, e))
}

pub(crate) fn instance_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Runs the command line `args` (program name first) and returns the exit
/// status: 0 on success, 1 on bad input or an infeasible solution, 2 on a
/// usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Postprocess(a) => cmd_postprocess(a, out),
        Command::Generate(a) => cmd_generate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure(format!("writing output: {e}"))
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_instance(&a.input)?;
    let opts = SolveOptions { algorithm: a.algo, s: a.s, mu: a.mu.0, post: a.post, n: a.n.map(|n| n as usize) };
    let solved = solve(&g, &opts).map_err(|e| Failure::at(&a.input, e))?;
    let report = SolveReport::new(&instance_id(&a.input), &g, &opts, &solved);
    if let Some(path) = &a.output {
        write_solution(create(path)?, &g, &solved.tree, a.algo.name(), solved.lower_bound)
            .map_err(|e| Failure::at(path, e))?;
    }
    match a.report {
        ReportFormat::Json => {
            let json = serde_json::to_string(&report).expect("reports serialize");
            writeln!(out, "{json}").map_err(io_failure)?;
        }
        _ => writeln!(out, "{}", report.text_line()).map_err(io_failure)?,
    }
    Ok(0)
}

fn read_solution(g: &Graph, path: &Path) -> Result<crate::stp::ParsedSolution, Failure> {
    let file = File::open(path).map_err(|e| Failure::at(path, e))?;
    parse_solution(g, BufReader::new(file)).map_err(|e| Failure::at(path, e))
}

fn cmd_postprocess(a: PostprocessArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_instance(&a.input)?;
    let sol = read_solution(&g, &a.tree)?;
    let before = net_cost(&g, &sol.tree).map_err(|e| Failure::at(&a.tree, e))?;
    let tree = p3(&g, &sol.tree, &P3Config::for_graph(&g, a.n as usize)).map_err(|e| Failure::at(&a.tree, e))?;
    let after = net_cost(&g, &tree).expect("p3 returns a tree of g");
    let algorithm = if sol.algorithm.is_empty() { "p3".to_string() } else { format!("{}+p3", sol.algorithm) };
    if let Some(path) = &a.output {
        write_solution(create(path)?, &g, &tree, &algorithm, sol.lower_bound).map_err(|e| Failure::at(path, e))?;
    }
    writeln!(
        out,
        "instance={} algo={} n={} net_cost_before={} net_cost={} vertices={} edges={}",
        instance_id(&a.input),
        algorithm,
        a.n,
        format_sig9(before),
        format_sig9(after),
        tree.vertices().len(),
        tree.edges().len()
    )
    .map_err(io_failure)?;
    Ok(0)
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = GeneratorParams {
        vertex_count: a.nodes,
        edge_count: a.edges,
        prized_fraction: a.prized_frac,
        prize_range: a.prize_range,
        cost_range: a.cost_range,
        seed: a.seed,
    };
    let g = generate_instance(&params).map_err(|e| Failure(e.to_string()))?;
    write_graph(create(&a.output)?, &g, Some(&params.comment())).map_err(|e| Failure::at(&a.output, e))?;
    let prized = g.prizes().iter().filter(|&&p| p > 0.0).count();
    writeln!(
        out,
        "wrote {} nodes={} edges={} prized={} seed={}",
        a.output.display(),
        g.vertex_count(),
        g.edge_count(),
        prized,
        a.seed
    )
    .map_err(io_failure)?;
    Ok(0)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = read_instance(&a.input)?;
    let sol = read_solution(&g, &a.tree)?;
    let mut cert = validate_solution(&g, &sol.tree);
    if let Some(lb) = sol.lower_bound {
        cert = cert.with_lower_bound(lb);
    }
    let recomputed = format_sig9(cert.net_cost);
    if recomputed != sol.net_cost_text {
        cert.feasible = false;
        cert.violations.push(format!("NETCOST {} differs from the recomputed {recomputed}", sol.net_cost_text));
    }
    let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), format_sig9);
    let w = |e: std::io::Error| io_failure(e);
    writeln!(
        out,
        "feasible={} net_cost={} lower_bound={} ratio={}",
        cert.feasible,
        recomputed,
        opt(cert.lower_bound),
        opt(cert.ratio_bound)
    )
    .map_err(w)?;
    for v in &cert.violations {
        writeln!(out, "violation: {v}").map_err(w)?;
    }
    if a.exact {
        let best = exact_pcst(&g).map_err(|e| Failure::at(&a.input, e))?;
        let optimum = net_cost(&g, &best).expect("oracle returns a tree of g");
        writeln!(out, "optimum={} gap={}", format_sig9(optimum), format_sig9(cert.net_cost - optimum)).map_err(w)?;
    }
    Ok(if cert.feasible { 0 } else { 1 })
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let pattern = glob::glob(&a.instances).map_err(|e| Failure(format!("bad glob {:?}: {e}", a.instances)))?;
    let mut paths = Vec::new();
    for entry in pattern {
        paths.push(entry.map_err(|e| Failure(e.to_string()))?);
    }
    paths.sort();
    if paths.is_empty() {
        return Err(Failure(format!("no instance matches {:?}", a.instances)));
    }
    let opts = BenchOptions {
        algorithms: a.algos,
        repeat: a.repeat as usize,
        jobs: a.jobs as usize,
        post: a.post,
        n: a.n.map(|n| n as usize),
        s: a.s,
    };
    let rows = run_bench(&paths, &opts)?;
    let w = |e: std::io::Error| io_failure(e);
    match a.report {
        ReportFormat::Json => {
            writeln!(out, "{}", serde_json::to_string(&rows).expect("rows serialize")).map_err(w)?;
        }
        ReportFormat::Csv => {
            writeln!(out, "{}", crate::bench::CSV_HEADER).map_err(w)?;
            for r in &rows {
                writeln!(out, "{}", r.csv_line()).map_err(w)?;
            }
        }
        ReportFormat::Text => {
            for r in &rows {
                writeln!(out, "{}", r.text_line()).map_err(w)?;
            }
        }
    }
    Ok(0)
}
