//! Solving CNF formulas with the built-in CDCL solver or an external
//! DIMACS solver process.

mod cdcl;
mod external;

use std::fmt;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{Assignment, CnfFormula};

pub use external::{parse_solver_output, ExternalSolver};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("failed to run external solver `{command}`: {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("external solver exited with unexpected status {0}")]
    ExitStatus(String),
    #[error("could not parse external solver output: {0}")]
    Output(String),
    #[error("external solver model falsifies clause {clause}")]
    BadModel { clause: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Sat => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Total model over all formula variables; present exactly when SAT.
    pub assignment: Option<Assignment>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RestartPolicy {
    #[default]
    Luby,
    /// Restart when recent learnt clauses are much worse (by LBD) than the
    /// running average.
    Glucose,
}

/// Tuning for the built-in solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Activity decay per conflict (VSIDS); larger keeps history longer.
    pub var_decay: f64,
    pub clause_decay: f64,
    pub restarts: RestartPolicy,
    /// Conflicts per unit of the Luby restart sequence.
    pub restart_unit: u64,
    /// Probability of a random decision; 0 keeps the search fully
    /// activity-driven.
    pub random_var_freq: f64,
    pub seed: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            var_decay: 0.95,
            clause_decay: 0.999,
            restarts: RestartPolicy::Luby,
            restart_unit: 100,
            random_var_freq: 0.0,
            seed: 0,
            time_limit: None,
        }
    }
}

/// Solves with the built-in CDCL solver. A SAT answer's model is checked
/// against every clause before it is returned.
pub fn solve(formula: &CnfFormula, config: &SolverConfig) -> SolveResult {
    let result = cdcl::Cdcl::new(formula, *config).solve();
    if let Some(model) = &result.assignment {
        if let Some(clause) = formula.first_falsified(model) {
            panic!("internal solver produced a model falsifying clause {clause}");
        }
    }
    result
}

/// Which solver a search or benchmark uses.
#[derive(Debug, Clone)]
pub enum Backend {
    Internal(SolverConfig),
    External(ExternalSolver),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Internal(SolverConfig::default())
    }
}

impl Backend {
    /// Parses `internal` or a whitespace-separated command line.
    pub fn from_spec(spec: &str, seed: u64) -> Backend {
        if spec.trim() == "internal" {
            Backend::Internal(SolverConfig {
                seed,
                ..Default::default()
            })
        } else {
            Backend::External(ExternalSolver::from_command_line(spec))
        }
    }

    pub fn solve(&self, formula: &CnfFormula, time_limit: Option<Duration>) -> Result<SolveResult, SolveError> {
        match self {
            Backend::Internal(config) => {
                let config = SolverConfig { time_limit, ..*config };
                Ok(solve(formula, &config))
            }
            Backend::External(ext) => ext.solve(formula, time_limit),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Backend::Internal(_) => "internal".to_string(),
            Backend::External(ext) => ext.command_line(),
        }
    }
}
