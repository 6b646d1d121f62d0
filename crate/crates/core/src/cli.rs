//! The `gridsat` command line. `run` parses arguments, writes the report to
//! `out` and diagnostics to `err`, and returns the process exit code:
//! 0 when the question was answered, 2 on timeout, 1 on usage or input
//! errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{parse_dimacs, to_dimacs, CardinalityEncoding, DimacsOptions, EncoderConfig};
use crate::encode::Problem;
use crate::graph::{generators, parse_edge_list, parse_gml, Graph};
use crate::report::{Report, Settings};
use crate::sat::{Backend, SolveStatus};
use crate::search::{
    decide, default_bounds, run_benchmark, solve_min_parameter, st_instances, write_csv, write_jsonl,
    BenchConfig, BenchInstance, Query,
};
use crate::svg::{render_svg, SvgOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gridsat", version, about = "SAT-based grid layouts for graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum pathwidth (interval supergraph with small cliques)
    Pathwidth(ProblemArgs),
    /// Minimum bandwidth (vertex order with short edges)
    Bandwidth(ProblemArgs),
    /// st-orientation with the fewest levels
    StOrient(StArgs),
    /// Bar visibility representation with minimum width
    BarVis(BarArgs),
    /// Bar k-visibility representation with minimum width
    BarKVis(BarKArgs),
    /// Boxicity layout on the smallest square grid
    Boxicity(BoxArgs),
    /// Solve a DIMACS CNF file
    SolveCnf(CnfArgs),
    /// Run a minimum-parameter search over many graphs
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    Auto,
    Edges,
    Gml,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cardinality {
    Binomial,
    Sequential,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Graph file (edge list or GML); "-" reads standard input
    input: String,
    #[arg(long, value_enum, default_value = "auto")]
    format: InputFormat,
    /// Total time budget in seconds [default: 300, or 600 for 2-d problems]
    #[arg(long)]
    timeout: Option<f64>,
    /// "internal" or an external solver command line
    #[arg(long, default_value = "internal")]
    solver: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lower end of the parameter sweep
    #[arg(long)]
    min: Option<usize>,
    /// Upper end of the parameter sweep
    #[arg(long)]
    max: Option<usize>,
    /// Answer a single decision query at this parameter value
    #[arg(long, num_args = 0..=1, value_name = "V")]
    param: Option<Option<usize>>,
    /// Write the DIMACS formula of the decided (or optimal) value
    #[arg(long, value_name = "PATH")]
    emit_cnf: Option<PathBuf>,
    /// Write an SVG drawing of a two-dimensional layout
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Draw grid lines in the SVG
    #[arg(long)]
    grid_lines: bool,
    #[arg(long, value_enum, default_value = "binomial")]
    cardinality: Cardinality,
    /// Largest number of clauses a single constraint may generate
    #[arg(long, default_value_t = 10_000_000)]
    clause_limit: u64,
}

#[derive(Debug, Args)]
struct StArgs {
    #[command(flatten)]
    common: ProblemArgs,
    /// Source vertex (0-based index)
    #[arg(long)]
    s: usize,
    /// Sink vertex (0-based index)
    #[arg(long)]
    t: usize,
    /// Add the edge st when the graph lacks it
    #[arg(long)]
    add_st_edge: bool,
}

#[derive(Debug, Args)]
struct BarArgs {
    #[command(flatten)]
    common: ProblemArgs,
    /// Grid size; H fixes the height, W caps the width sweep and is the
    /// value a bare --param decides
    #[arg(long, value_name = "HxW", value_parser = parse_grid)]
    grid: Option<(u32, u32)>,
    /// Do not tie edge bar ends to their incidence points
    #[arg(long)]
    no_sten: bool,
}

#[derive(Debug, Args)]
struct BarKArgs {
    #[command(flatten)]
    bar: BarArgs,
    /// Non-incident vertex bars each edge may cross
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Debug, Args)]
struct BoxArgs {
    #[command(flatten)]
    common: ProblemArgs,
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Debug, Args)]
struct CnfArgs {
    /// DIMACS file; "-" reads standard input
    input: String,
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    #[arg(long, default_value = "internal")]
    solver: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchProblem {
    Pathwidth,
    Bandwidth,
    StOrient,
    BarVis,
    BarKVis,
    Boxicity,
}

impl From<BenchProblem> for Problem {
    fn from(p: BenchProblem) -> Problem {
        match p {
            BenchProblem::Pathwidth => Problem::Pathwidth,
            BenchProblem::Bandwidth => Problem::Bandwidth,
            BenchProblem::StOrient => Problem::StOrientation,
            BenchProblem::BarVis => Problem::BarVisibility,
            BenchProblem::BarKVis => Problem::BarKVisibility,
            BenchProblem::Boxicity => Problem::Boxicity,
        }
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Graph files or directories of graph files
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    problem: BenchProblem,
    /// Also generate this many seeded random connected graphs
    #[arg(long, default_value_t = 0)]
    random: usize,
    /// Per-instance time budget in seconds [default: 300, or 600 for 2-d]
    #[arg(long)]
    timeout: Option<f64>,
    /// Stop after more than this many consecutive timeouts
    #[arg(long, default_value_t = 400)]
    early_stop: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "internal")]
    solver: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    no_sten: bool,
    /// Write rows as CSV
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Write rows as JSON lines (standard output when neither file is given)
    #[arg(long, value_name = "PATH")]
    jsonl: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(u32, u32), String> {
    let (h, w) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected HxW, got `{s}`"))?;
    let h: u32 = h.trim().parse().map_err(|_| format!("bad height in `{s}`"))?;
    let w: u32 = w.trim().parse().map_err(|_| format!("bad width in `{s}`"))?;
    if h == 0 || w == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok((h, w))
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Pathwidth(a) => {
            let g = load_graph(&a.input, a.format)?;
            solve_problem(&g, Query::new(Problem::Pathwidth), &a, None, out, err)
        }
        Command::Bandwidth(a) => {
            let g = load_graph(&a.input, a.format)?;
            solve_problem(&g, Query::new(Problem::Bandwidth), &a, None, out, err)
        }
        Command::StOrient(a) => {
            let mut g = load_graph(&a.common.input, a.common.format)?;
            if a.add_st_edge && a.s < g.n() && a.t < g.n() && a.s != a.t && !g.has_edge(a.s, a.t) {
                let name = g.name().map(str::to_string);
                g = g.with_edge(a.s, a.t)?;
                if let Some(name) = name {
                    g = g.with_name(name);
                }
                let _ = writeln!(err, "added edge {}-{}", a.s, a.t);
            }
            let query = Query::new(Problem::StOrientation).with_terminals(a.s, a.t);
            solve_problem(&g, query, &a.common, None, out, err)
        }
        Command::BarVis(a) => bar_command(Problem::BarVisibility, &a, 0, out, err),
        Command::BarKVis(a) => bar_command(Problem::BarKVisibility, &a.bar, a.k, out, err),
        Command::Boxicity(a) => {
            let g = load_graph(&a.common.input, a.common.format)?;
            let mut query = Query::new(Problem::Boxicity);
            query.dim = a.dim;
            solve_problem(&g, query, &a.common, None, out, err)
        }
        Command::SolveCnf(a) => solve_cnf(&a, out),
        Command::Bench(a) => bench(&a, out, err),
    }
}

fn bar_command(
    problem: Problem,
    a: &BarArgs,
    k: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let g = load_graph(&a.common.input, a.common.format)?;
    let mut query = Query::new(problem);
    query.crossings = k;
    query.height = a.grid.map(|(h, _)| h);
    query.options.sten = !a.no_sten;
    solve_problem(&g, query, &a.common, a.grid.map(|(_, w)| w as usize), out, err)
}

fn read_input(input: &str) -> Result<String, CliError> {
    if input == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(input).map_err(|e| CliError(format!("{input}: {e}")))
    }
}

fn looks_like_gml(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("graph") || l.starts_with("Creator") || l.starts_with("creator"))
}

fn load_graph(input: &str, format: InputFormat) -> Result<Graph, CliError> {
    let text = read_input(input)?;
    let gml = match format {
        InputFormat::Gml => true,
        InputFormat::Edges => false,
        InputFormat::Auto => {
            Path::new(input).extension().is_some_and(|e| e.eq_ignore_ascii_case("gml")) || looks_like_gml(&text)
        }
    };
    let g = if gml { parse_gml(&text) } else { parse_edge_list(&text) }
        .map_err(|e| CliError(format!("{input}: {e}")))?;
    Ok(match (g.name().is_some(), Path::new(input).file_stem()) {
        (false, Some(stem)) if input != "-" => {
            let stem = stem.to_string_lossy().into_owned();
            g.with_name(stem)
        }
        _ => g,
    })
}

fn timeout_for(problem: Problem, timeout: Option<f64>) -> Result<Duration, CliError> {
    let secs = timeout.unwrap_or(if problem.is_two_dimensional() { 600.0 } else { 300.0 });
    Duration::try_from_secs_f64(secs).map_err(|_| CliError(format!("invalid timeout {secs}")))
}

fn solve_problem(
    g: &Graph,
    mut query: Query,
    a: &ProblemArgs,
    grid_width: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    query.options.config = EncoderConfig {
        cardinality: match a.cardinality {
            Cardinality::Binomial => CardinalityEncoding::Binomial,
            Cardinality::Sequential => CardinalityEncoding::SequentialCounter,
        },
        clause_limit: a.clause_limit,
    };
    let budget = timeout_for(query.problem, a.timeout)?;
    let backend = Backend::from_spec(&a.solver, a.seed);
    let is_bar = matches!(query.problem, Problem::BarVisibility | Problem::BarKVisibility);
    let settings = Settings {
        seed: a.seed,
        timeout_seconds: budget.as_secs_f64(),
        s: query.terminals.map(|st| st.0),
        t: query.terminals.map(|st| st.1),
        height: is_bar.then(|| query.height.unwrap_or(g.n().max(1) as u32)),
        crossings: (query.problem == Problem::BarKVisibility).then_some(query.crossings),
        dim: (query.problem == Problem::Boxicity).then_some(query.dim),
        sten: is_bar.then_some(query.options.sten),
    };

    let decision_value = match a.param {
        Some(Some(v)) => Some(v),
        Some(None) => Some(grid_width.ok_or_else(|| {
            CliError("--param needs a value (only bar problems take it from --grid)".into())
        })?),
        None => None,
    };
    let report = match decision_value {
        Some(v) => {
            let decision = decide(&query, g, v, &backend, Some(budget))?;
            Report::from_decision(query.problem, g, decision, settings, backend.name())
        }
        None => {
            let (lo, hi) = default_bounds(&query, g);
            let hi = grid_width.map_or(hi, |w| w.max(lo));
            let bounds = (a.min.unwrap_or(lo), a.max.unwrap_or(hi));
            let outcome = solve_min_parameter(&query, g, bounds, Some(budget), &backend)?;
            Report::from_outcome(g, outcome, settings, backend.name())
        }
    };

    if let Some(path) = &a.emit_cnf {
        let value = report
            .parameter
            .or(report.optimum)
            .or(report.iterations.last().map(|r| r.value))
            .or(report.bounds.map(|b| b.0))
            .unwrap_or(0);
        let enc = query.encode(g, value)?;
        fs::write(path, to_dimacs(&enc.formula, DimacsOptions { provenance_comments: true }))
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let _ = writeln!(err, "wrote formula for value {value} to {}", path.display());
    }
    if let Some(path) = &a.svg {
        match report.solution.as_ref().and_then(|s| render_svg(s, SvgOptions { grid_lines: a.grid_lines })) {
            Some(svg) => {
                fs::write(path, svg).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
            }
            None => {
                let _ = writeln!(err, "no drawable layout; {} not written", path.display());
            }
        }
    }
    writeln!(out, "{}", report.to_json())?;
    Ok(if report.is_timeout() { EXIT_TIMEOUT } else { EXIT_OK })
}

fn solve_cnf(a: &CnfArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read_input(&a.input)?;
    let formula = parse_dimacs(&text).map_err(|e| CliError(format!("{}: {e}", a.input)))?;
    let budget = Duration::try_from_secs_f64(a.timeout).map_err(|_| CliError("invalid timeout".into()))?;
    let result = Backend::from_spec(&a.solver, a.seed).solve(&formula, Some(budget))?;
    match (result.status, &result.assignment) {
        (SolveStatus::Sat, Some(model)) => {
            let lits: Vec<String> = model.to_dimacs_model().iter().map(i32::to_string).collect();
            let mut line = lits.join(" ");
            if !line.is_empty() {
                line.push(' ');
            }
            writeln!(out, "SAT\n{line}0")?;
            Ok(EXIT_OK)
        }
        (SolveStatus::Unsat, _) => {
            writeln!(out, "UNSAT")?;
            Ok(EXIT_OK)
        }
        _ => {
            writeln!(out, "TIMEOUT")?;
            Ok(EXIT_TIMEOUT)
        }
    }
}

fn graph_files(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|e| ["gml", "txt", "edges", "el"].iter().any(|x| e.eq_ignore_ascii_case(x)))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// Seeded random connected graphs with 4 to 9 vertices.
pub fn random_corpus(count: usize, seed: u64) -> Vec<BenchInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(4..=9);
            let extra = rng.gen_range(0.0..0.5);
            let id = format!("random-{i}");
            BenchInstance::new(id.clone(), generators::random_connected(n, extra, &mut rng).with_name(id))
        })
        .collect()
}

fn bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let problem: Problem = a.problem.into();
    let mut instances = Vec::new();
    for input in &a.inputs {
        for file in graph_files(input)? {
            let name = file.to_string_lossy().into_owned();
            let g = load_graph(&name, InputFormat::Auto)?;
            let id = g.name().unwrap_or(&name).to_string();
            instances.push(BenchInstance::new(id, g));
        }
    }
    instances.extend(random_corpus(a.random, a.seed));
    if instances.is_empty() {
        return Err(CliError("no graphs given (pass files, directories or --random N)".into()));
    }
    if problem == Problem::StOrientation {
        instances = st_instances(&instances, a.seed);
    }
    let mut query = Query::new(problem);
    query.crossings = a.k;
    query.dim = a.dim;
    query.options.sten = !a.no_sten;
    let config = BenchConfig {
        query,
        timeout: timeout_for(problem, a.timeout)?,
        early_stop: a.early_stop,
        workers: a.workers,
        seed: a.seed,
        backend: Backend::from_spec(&a.solver, a.seed),
    };
    let report = run_benchmark(instances, &config);
    if let Some(path) = &a.csv {
        let file = fs::File::create(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        write_csv(&report.rows, file)?;
    }
    if let Some(path) = &a.jsonl {
        let file = fs::File::create(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        write_jsonl(&report.rows, io::BufWriter::new(file))?;
    }
    if a.csv.is_none() && a.jsonl.is_none() {
        write_jsonl(&report.rows, &mut *out)?;
    }
    let solved = report.rows.iter().filter(|r| r.status == "OPTIMAL").count();
    let _ = writeln!(
        err,
        "{solved}/{} instances solved{}",
        report.rows.len(),
        if report.stopped_early { " (stopped early after consecutive timeouts)" } else { "" }
    );
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parser() {
        assert_eq!(parse_grid("2x1"), Ok((2, 1)));
        assert_eq!(parse_grid("5X6"), Ok((5, 6)));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("3").is_err());
    }

    #[test]
    fn gml_sniffing() {
        assert!(looks_like_gml("graph [\n node [ id 0 ]\n]"));
        assert!(!looks_like_gml("n 3\n0 1\n"));
    }
}
