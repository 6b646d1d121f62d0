use std::fs;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{SolveError, SolveResult, SolveStats, SolveStatus};
use crate::cnf::{to_dimacs, Assignment, CnfFormula, DimacsOptions, VarId};

/// An external solver invoked as `program args…`.
///
/// The argument `{in}` is replaced by the path of the DIMACS input (appended
/// when absent). If an argument contains `{out}`, the result is read from
/// that file instead of standard output, as MiniSat writes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
}

const POLL: Duration = Duration::from_millis(5);

impl ExternalSolver {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> ExternalSolver {
        ExternalSolver {
            program: program.into(),
            args,
        }
    }

    pub fn from_command_line(command: &str) -> ExternalSolver {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next().unwrap_or_default();
        ExternalSolver {
            program,
            args: parts.collect(),
        }
    }

    pub fn command_line(&self) -> String {
        std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn solve(&self, formula: &CnfFormula, time_limit: Option<Duration>) -> Result<SolveResult, SolveError> {
        let started = Instant::now();
        let dir = tempfile::tempdir()?;
        let input = dir.path().join("input.cnf");
        let output = dir.path().join("result.txt");
        let stdout_path = dir.path().join("stdout.txt");
        fs::write(&input, to_dimacs(formula, DimacsOptions::default()))?;

        let input_str = input.to_string_lossy().into_owned();
        let output_str = output.to_string_lossy().into_owned();
        let mut uses_input = false;
        let mut uses_output = false;
        let mut args: Vec<String> = self
            .args
            .iter()
            .map(|a| {
                uses_input |= a.contains("{in}");
                uses_output |= a.contains("{out}");
                a.replace("{in}", &input_str).replace("{out}", &output_str)
            })
            .collect();
        if !uses_input {
            args.push(input_str);
        }

        let stdout_file = fs::File::create(&stdout_path)?;
        let mut child = Command::new(&self.program)
            .args(&args)
            .stdin(Stdio::null())
            .stdout(stdout_file)
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolveError::Spawn {
                command: self.command_line(),
                source,
            })?;

        let exit = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if time_limit.is_some_and(|limit| started.elapsed() >= limit) {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(SolveResult {
                    status: SolveStatus::Timeout,
                    assignment: None,
                    stats: SolveStats {
                        seconds: started.elapsed().as_secs_f64(),
                        ..Default::default()
                    },
                });
            }
            thread::sleep(POLL);
        };
        match exit.code() {
            Some(0 | 10 | 20) => {}
            other => return Err(SolveError::ExitStatus(format!("{other:?}"))),
        }

        let text = if uses_output {
            fs::read_to_string(&output)?
        } else {
            fs::read_to_string(&stdout_path)?
        };
        let (status, model) = parse_solver_output(&text)?;
        let assignment = match status {
            SolveStatus::Sat => {
                let model = model.ok_or_else(|| SolveError::Output("SAT answer without a model".into()))?;
                let mut a = Assignment::all_false(formula.num_vars());
                for lit in model {
                    let var = lit.unsigned_abs() as usize;
                    if var == 0 || var > formula.num_vars() {
                        return Err(SolveError::Output(format!("model literal {lit} out of range")));
                    }
                    a.set(VarId::new(var as u32), lit > 0);
                }
                if let Some(clause) = formula.first_falsified(&a) {
                    return Err(SolveError::BadModel { clause });
                }
                Some(a)
            }
            _ => None,
        };
        Ok(SolveResult {
            status,
            assignment,
            stats: SolveStats {
                seconds: started.elapsed().as_secs_f64(),
                ..Default::default()
            },
        })
    }
}

/// Reads a solver answer: a status line (`SAT`, `UNSAT`, `SATISFIABLE`,
/// `UNSATISFIABLE`, optionally prefixed with `s`) and, for SAT, the model
/// literals from `v` lines or bare integer lines, up to a terminating `0`.
pub fn parse_solver_output(text: &str) -> Result<(SolveStatus, Option<Vec<i32>>), SolveError> {
    let mut status = None;
    let mut model: Vec<i32> = Vec::new();
    let mut model_seen = false;
    for line in text.lines() {
        let line = line.trim();
        let body = line
            .strip_prefix("s ")
            .or_else(|| line.strip_prefix("v "))
            .unwrap_or(line)
            .trim();
        match body {
            "SAT" | "SATISFIABLE" => {
                status = Some(SolveStatus::Sat);
                continue;
            }
            "UNSAT" | "UNSATISFIABLE" => {
                status = Some(SolveStatus::Unsat);
                continue;
            }
            "INDET" | "INDETERMINATE" | "UNKNOWN" => {
                status = Some(SolveStatus::Timeout);
                continue;
            }
            _ => {}
        }
        if line.starts_with('c') || body.is_empty() {
            continue;
        }
        let ints: Result<Vec<i32>, _> = body.split_whitespace().map(str::parse::<i32>).collect();
        if let Ok(ints) = ints {
            if status == Some(SolveStatus::Sat) || line.starts_with("v ") {
                model_seen = true;
                model.extend(ints.into_iter().take_while(|&l| l != 0));
            }
        }
    }
    match status {
        Some(SolveStatus::Sat) => Ok((SolveStatus::Sat, model_seen.then_some(model))),
        Some(s) => Ok((s, None)),
        None => Err(SolveError::Output(
            text.lines().next().unwrap_or("<empty>").to_string(),
        )),
    }
}
