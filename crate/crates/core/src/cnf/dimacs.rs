use std::fmt::Write as _;

use super::{CnfError, CnfFormula, Lit};

#[derive(Debug, Clone, Copy, Default)]
pub struct DimacsOptions {
    /// Emit a `c <constraint>` comment whenever the clause provenance changes.
    pub provenance_comments: bool,
}

pub fn to_dimacs(formula: &CnfFormula, options: DimacsOptions) -> String {
    let mut out = String::with_capacity(16 + formula.num_literals() * 4);
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses());
    let mut last_tag = "";
    for (i, clause) in formula.clauses().enumerate() {
        if options.provenance_comments {
            let tag = formula.tag(i);
            if tag != last_tag && !tag.is_empty() {
                let _ = writeln!(out, "c {tag}");
            }
            last_tag = tag;
        }
        for lit in clause {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let err = |line: usize, message: String| CnfError::Dimacs { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut formula = CnfFormula::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((v, c)) => {
                    formula.ensure_vars(v);
                    header = Some((v, c));
                }
                None => return Err(err(line_no, format!("malformed header `{line}`"))),
            }
            continue;
        }
        let (num_vars, _) = header.ok_or_else(|| err(line_no, "clause before header".into()))?;
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{token}`")))?;
            if value == 0 {
                if current.is_empty() {
                    formula.mark_contradiction("");
                } else {
                    formula.add_clause(&current);
                    current.clear();
                }
            } else if value.unsigned_abs() as usize > num_vars {
                return Err(err(
                    line_no,
                    format!("literal {value} out of range for {num_vars} variables"),
                ));
            } else {
                current.push(Lit::from_dimacs(value as i32));
            }
        }
    }
    let (_, num_clauses) = header.ok_or_else(|| err(last_line, "missing `p cnf` header".into()))?;
    if !current.is_empty() {
        formula.add_clause(&current);
    }
    if formula.num_clauses() != num_clauses {
        return Err(err(
            last_line,
            format!(
                "header declares {num_clauses} clauses but {} were read",
                formula.num_clauses()
            ),
        ));
    }
    Ok(formula)
}
