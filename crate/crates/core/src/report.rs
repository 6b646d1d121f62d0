//! The JSON report printed for a search or a single decision query.

use serde::Serialize;

use crate::encode::Problem;
use crate::graph::Graph;
use crate::layout::Solution;
use crate::search::{Decision, IterationRecord, SearchOutcome};

/// Top-level keys. Every report has all of them; absent
/// values are `null`.
pub const REPORT_KEYS: [&str; 12] = [
    "problem",
    "mode",
    "graph",
    "settings",
    "status",
    "optimum",
    "parameter",
    "bounds",
    "iterations",
    "total_seconds",
    "solver",
    "solution",
];

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub id: String,
    pub n: usize,
    pub m: usize,
}

impl GraphInfo {
    pub fn of(g: &Graph) -> GraphInfo {
        GraphInfo {
            id: g.name().unwrap_or("graph").to_string(),
            n: g.n(),
            m: g.m(),
        }
    }
}

/// Fixed inputs of the run besides the swept parameter.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub timeout_seconds: f64,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub height: Option<u32>,
    pub crossings: Option<usize>,
    pub dim: Option<usize>,
    pub sten: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Search,
    Decision,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub problem: Problem,
    pub mode: Mode,
    pub graph: GraphInfo,
    pub settings: Settings,
    /// `OPTIMAL`, `TIMEOUT` or `INFEASIBLE_IN_RANGE` for a search; `SAT`,
    /// `UNSAT` or `TIMEOUT` for a decision.
    pub status: String,
    pub optimum: Option<usize>,
    pub parameter: Option<usize>,
    pub bounds: Option<(usize, usize)>,
    pub iterations: Vec<IterationRecord>,
    pub total_seconds: f64,
    pub solver: String,
    pub solution: Option<Solution>,
}

impl Report {
    pub fn from_outcome(g: &Graph, outcome: SearchOutcome, settings: Settings, solver: String) -> Report {
        Report {
            problem: outcome.problem,
            mode: Mode::Search,
            graph: GraphInfo::of(g),
            settings,
            status: outcome.status.as_str().to_string(),
            optimum: outcome.optimum,
            parameter: None,
            bounds: Some(outcome.bounds),
            iterations: outcome.iterations,
            total_seconds: outcome.total_seconds,
            solver,
            solution: outcome.solution,
        }
    }

    pub fn from_decision(
        problem: Problem,
        g: &Graph,
        decision: Decision,
        settings: Settings,
        solver: String,
    ) -> Report {
        Report {
            problem,
            mode: Mode::Decision,
            graph: GraphInfo::of(g),
            settings,
            status: decision.record.status.to_string(),
            optimum: None,
            parameter: Some(decision.record.value),
            bounds: None,
            total_seconds: decision.record.seconds,
            iterations: vec![decision.record],
            solver,
            solution: decision.solution,
        }
    }

    pub fn is_timeout(&self) -> bool {
        self.status == "TIMEOUT"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::complete;
    use crate::sat::Backend;
    use crate::search::{solve_min_parameter, Query};

    #[test]
    fn has_every_key() {
        let g = complete(3).with_name("k3");
        let q = Query::new(Problem::Pathwidth);
        let outcome = solve_min_parameter(&q, &g, (1, 2), None, &Backend::default()).unwrap();
        let report = Report::from_outcome(&g, outcome, Settings::default(), "internal".into());
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = REPORT_KEYS.to_vec();
        expected.sort_unstable();
        let mut got = keys.clone();
        got.sort_unstable();
        assert_eq!(got, expected);
        assert_eq!(value["optimum"], 2);
        assert_eq!(value["graph"]["id"], "k3");
        assert_eq!(value["solution"]["kind"], "intervals");
    }
}
