//! Minimum-parameter search by linear upward scan, and a batch benchmark
//! harness over graph collections.

use std::io::Write;
use std::thread;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cnf::Assignment;
use crate::encode::{
    decode_bandwidth, decode_boxicity, decode_layout2d, decode_orientation, decode_pathwidth,
    encode_bandwidth, encode_bar_k_visibility, encode_bar_visibility, encode_boxicity, encode_pathwidth,
    encode_st_orientation, EncodeError, EncodeOptions, Encoding, Problem,
};
use crate::graph::{biconnected_components, Graph};
use crate::layout::Solution;
use crate::sat::{Backend, SolveError, SolveStatus};
use crate::verify::{
    verify_bandwidth, verify_bar_visibility, verify_boxicity, verify_pathwidth, verify_st_orientation,
    Violation,
};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("decoded solution at parameter {value} failed verification: {violation}")]
    Verification { value: usize, violation: Violation },
    #[error("empty parameter range [{lower}, {upper}]")]
    EmptyRange { lower: usize, upper: usize },
    #[error("st-orientation needs a source and a sink")]
    MissingTerminals,
}

/// What to minimize, with the fixed side parameters of the problem.
///
/// The swept value is `p` for pathwidth, `k` for bandwidth, the number of
/// levels for st-orientation, the width `W` for the bar problems (at height
/// `height`, default `n`) and the side length for boxicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub problem: Problem,
    pub terminals: Option<(usize, usize)>,
    /// Crossing budget for bar k-visibility.
    pub crossings: usize,
    pub height: Option<u32>,
    /// Boxicity dimension.
    pub dim: usize,
    pub options: EncodeOptions,
}

impl Query {
    pub fn new(problem: Problem) -> Query {
        Query {
            problem,
            terminals: None,
            crossings: 1,
            height: None,
            dim: 2,
            options: EncodeOptions::default(),
        }
    }

    pub fn with_terminals(mut self, s: usize, t: usize) -> Query {
        self.terminals = Some((s, t));
        self
    }

    fn height_for(&self, g: &Graph) -> u32 {
        self.height.unwrap_or(g.n().max(1) as u32)
    }

    /// Builds the encoding for parameter value `value`.
    pub fn encode(&self, g: &Graph, value: usize) -> Result<Encoding, SearchError> {
        let opts = &self.options;
        let enc = match self.problem {
            Problem::Pathwidth => encode_pathwidth(g, value, opts)?,
            Problem::Bandwidth => encode_bandwidth(g, value, opts)?,
            Problem::StOrientation => {
                let (s, t) = self.terminals.ok_or(SearchError::MissingTerminals)?;
                encode_st_orientation(g, s, t, value, opts)?
            }
            Problem::BarVisibility => encode_bar_visibility(g, self.height_for(g), to_u32(value), opts)?,
            Problem::BarKVisibility => {
                encode_bar_k_visibility(g, self.height_for(g), to_u32(value), self.crossings, opts)?
            }
            Problem::Boxicity => encode_boxicity(g, self.dim, to_u32(value), opts)?,
        };
        Ok(enc)
    }

    /// Decodes a model and runs the matching independent verifier.
    pub fn decode_verified(
        &self,
        g: &Graph,
        enc: &Encoding,
        assignment: &Assignment,
        value: usize,
    ) -> Result<Solution, SearchError> {
        let fail = |violation| SearchError::Verification { value, violation };
        let solution = match self.problem {
            Problem::Pathwidth => {
                let layout = decode_pathwidth(enc, assignment)?;
                verify_pathwidth(g, &layout, value).map_err(fail)?;
                Solution::Intervals(layout)
            }
            Problem::Bandwidth => {
                let layout = decode_bandwidth(enc, assignment)?;
                verify_bandwidth(g, &layout.positions(), value).map_err(fail)?;
                Solution::Intervals(layout)
            }
            Problem::StOrientation => {
                let (s, t) = self.terminals.ok_or(SearchError::MissingTerminals)?;
                let orientation = decode_orientation(g, enc, assignment)?;
                verify_st_orientation(g, &orientation, s, t, value).map_err(fail)?;
                Solution::Orientation(orientation)
            }
            Problem::BarVisibility | Problem::BarKVisibility => {
                let layout = decode_layout2d(g, enc, assignment)?;
                let k = if self.problem == Problem::BarVisibility { 0 } else { self.crossings };
                verify_bar_visibility(g, &layout, k).map_err(fail)?;
                Solution::Bars(layout)
            }
            Problem::Boxicity => {
                let layout = decode_boxicity(enc, assignment)?;
                verify_boxicity(g, &layout).map_err(fail)?;
                Solution::Boxes(layout)
            }
        };
        Ok(solution)
    }
}

fn to_u32(value: usize) -> u32 {
    u32::try_from(value).unwrap_or(u32::MAX)
}

/// Default search range for `query` on `g`.
pub fn default_bounds(query: &Query, g: &Graph) -> (usize, usize) {
    let n = g.n();
    match query.problem {
        Problem::Pathwidth => {
            if g.m() == 0 {
                (0, 0)
            } else {
                (1, n - 1)
            }
        }
        Problem::Bandwidth => {
            let lower = g.max_degree().div_ceil(2);
            (lower, (n.saturating_sub(1)).max(lower))
        }
        Problem::StOrientation => {
            let lower = if n >= 3 { 3 } else { 2 };
            (lower, n.max(lower))
        }
        Problem::BarVisibility | Problem::BarKVisibility => (1, n.max(1)),
        Problem::Boxicity => (n.clamp(1, 3), n.max(1)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Optimal,
    Timeout,
    InfeasibleInRange,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Optimal => "OPTIMAL",
            SearchStatus::Timeout => "TIMEOUT",
            SearchStatus::InfeasibleInRange => "INFEASIBLE_IN_RANGE",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub value: usize,
    pub vars: usize,
    pub clauses: usize,
    pub status: SolveStatus,
    pub seconds: f64,
}

/// The answer to one decision query.
#[derive(Debug, Clone)]
pub struct Decision {
    pub record: IterationRecord,
    pub solution: Option<Solution>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub problem: Problem,
    pub graph_id: String,
    pub bounds: (usize, usize),
    pub status: SearchStatus,
    pub optimum: Option<usize>,
    pub iterations: Vec<IterationRecord>,
    pub total_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Solution>,
}

/// Encodes, solves and, on SAT, decodes and verifies parameter `value`.
pub fn decide(
    query: &Query,
    g: &Graph,
    value: usize,
    backend: &Backend,
    budget: Option<Duration>,
) -> Result<Decision, SearchError> {
    let started = Instant::now();
    let enc = query.encode(g, value)?;
    let result = backend.solve(&enc.formula, budget.map(|b| b.saturating_sub(started.elapsed())))?;
    let solution = match &result.assignment {
        Some(model) => Some(query.decode_verified(g, &enc, model, value)?),
        None => None,
    };
    Ok(Decision {
        record: IterationRecord {
            value,
            vars: enc.num_vars(),
            clauses: enc.num_clauses(),
            status: result.status,
            seconds: started.elapsed().as_secs_f64(),
        },
        solution,
    })
}

/// Tries `lower, lower + 1, …, upper` and stops at the first satisfiable
/// value or when the total budget runs out. Each iteration may use all of
/// the budget that remains.
pub fn solve_min_parameter(
    query: &Query,
    g: &Graph,
    bounds: (usize, usize),
    budget: Option<Duration>,
    backend: &Backend,
) -> Result<SearchOutcome, SearchError> {
    let (lower, upper) = bounds;
    if lower > upper {
        return Err(SearchError::EmptyRange { lower, upper });
    }
    let started = Instant::now();
    let mut outcome = SearchOutcome {
        problem: query.problem,
        graph_id: g.name().unwrap_or("graph").to_string(),
        bounds,
        status: SearchStatus::InfeasibleInRange,
        optimum: None,
        iterations: Vec::new(),
        total_seconds: 0.0,
        solution: None,
    };
    for value in lower..=upper {
        let remaining = budget.map(|b| b.saturating_sub(started.elapsed()));
        if remaining == Some(Duration::ZERO) {
            outcome.status = SearchStatus::Timeout;
            break;
        }
        let decision = decide(query, g, value, backend, remaining)?;
        let status = decision.record.status;
        outcome.iterations.push(decision.record);
        match status {
            SolveStatus::Sat => {
                outcome.status = SearchStatus::Optimal;
                outcome.optimum = Some(value);
                outcome.solution = decision.solution;
                break;
            }
            SolveStatus::Timeout => {
                outcome.status = SearchStatus::Timeout;
                break;
            }
            SolveStatus::Unsat => {}
        }
    }
    outcome.total_seconds = started.elapsed().as_secs_f64();
    Ok(outcome)
}

/// A graph to benchmark, with terminals for st-orientation runs.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub id: String,
    pub graph: Graph,
    pub terminals: Option<(usize, usize)>,
}

impl BenchInstance {
    pub fn new(id: impl Into<String>, graph: Graph) -> BenchInstance {
        BenchInstance {
            id: id.into(),
            graph,
            terminals: None,
        }
    }

    pub fn size(&self) -> usize {
        self.graph.n() + self.graph.m()
    }
}

/// Turns graphs into st-orientation instances: every biconnected block
/// with at least three vertices, a random pair of distinct terminals drawn
/// from `ChaCha8Rng::seed_from_u64(seed)`, and the edge between them added
/// when missing.
pub fn st_instances(graphs: &[BenchInstance], seed: u64) -> Vec<BenchInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for inst in graphs {
        for (b, block) in biconnected_components(&inst.graph).into_iter().enumerate() {
            let n = block.graph.n();
            if n < 3 {
                continue;
            }
            let picked: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().collect();
            let (s, t) = (picked[0], picked[1]);
            let graph = if block.graph.has_edge(s, t) {
                block.graph
            } else {
                block.graph.with_edge(s, t).expect("terminals are in range")
            };
            out.push(BenchInstance {
                id: format!("{}#{b}", inst.id),
                graph,
                terminals: Some((s, t)),
            });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub query: Query,
    /// Total budget per instance across all iterations.
    pub timeout: Duration,
    /// Stop once more than this many instances in a row timed out.
    pub early_stop: usize,
    pub workers: usize,
    pub seed: u64,
    pub backend: Backend,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub problem: Problem,
    pub status: String,
    pub optimum: Option<usize>,
    pub iterations: usize,
    pub total_seconds: f64,
    pub seed: u64,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub stopped_early: bool,
}

fn bench_one(inst: &BenchInstance, config: &BenchConfig) -> BenchRow {
    let mut query = config.query;
    if inst.terminals.is_some() {
        query.terminals = inst.terminals;
    }
    let g = &inst.graph;
    let mut row = BenchRow {
        graph_id: inst.id.clone(),
        n: g.n(),
        m: g.m(),
        problem: query.problem,
        status: String::new(),
        optimum: None,
        iterations: 0,
        total_seconds: 0.0,
        seed: config.seed,
        s: query.terminals.map(|st| st.0),
        t: query.terminals.map(|st| st.1),
        error: None,
    };
    let started = Instant::now();
    match solve_min_parameter(&query, g, default_bounds(&query, g), Some(config.timeout), &config.backend) {
        Ok(outcome) => {
            row.status = outcome.status.as_str().to_string();
            row.optimum = outcome.optimum;
            row.iterations = outcome.iterations.len();
            row.total_seconds = outcome.total_seconds;
        }
        Err(e) => {
            row.status = "ERROR".to_string();
            row.error = Some(e.to_string());
            row.total_seconds = started.elapsed().as_secs_f64();
        }
    }
    row
}

/// Runs the search on every instance in ascending order of `n + m`. Up to
/// `workers` instances run at once; the early stop is evaluated in order,
/// so the rows do not depend on the worker count.
pub fn run_benchmark(mut instances: Vec<BenchInstance>, config: &BenchConfig) -> BenchReport {
    instances.sort_by_key(BenchInstance::size);
    let workers = config.workers.max(1);
    let mut rows = Vec::with_capacity(instances.len());
    let mut streak = 0;
    for chunk in instances.chunks(workers) {
        let results: Vec<BenchRow> = if workers == 1 {
            chunk.iter().map(|inst| bench_one(inst, config)).collect()
        } else {
            thread::scope(|scope| {
                let handles: Vec<_> = chunk
                    .iter()
                    .map(|inst| scope.spawn(move || bench_one(inst, config)))
                    .collect();
                handles.into_iter().map(|h| h.join().expect("benchmark worker panicked")).collect()
            })
        };
        for row in results {
            streak = if row.status == SearchStatus::Timeout.as_str() { streak + 1 } else { 0 };
            rows.push(row);
            if streak > config.early_stop {
                return BenchReport { rows, stopped_early: true };
            }
        }
    }
    BenchReport { rows, stopped_early: false }
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
