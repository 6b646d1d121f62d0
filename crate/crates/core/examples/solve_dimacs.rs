//! Build a pigeonhole formula with cardinality constraints, round-trip it
//! through DIMACS and solve it.

use gridsat::cnf::{parse_dimacs, to_dimacs, CnfBuilder, DimacsOptions, EncoderConfig, Lit, ObjectId, VarName};
use gridsat::sat::{solve, SolverConfig};

fn pigeonhole(pigeons: u32, holes: u32) -> String {
    let mut b = CnfBuilder::new(EncoderConfig::default());
    let grid: Vec<Vec<Lit>> = (0..pigeons)
        .map(|p| {
            (0..holes)
                .map(|h| b.new_var(VarName::Cell { object: ObjectId::Vertex(p), cell: h }).unwrap().positive())
                .collect()
        })
        .collect();
    for row in &grid {
        b.at_least(row, 1, "pigeon").unwrap();
    }
    for h in 0..holes as usize {
        let column: Vec<Lit> = grid.iter().map(|row| row[h]).collect();
        b.at_most(&column, 1, "hole").unwrap();
    }
    to_dimacs(&b.formula, DimacsOptions::default())
}

fn main() {
    for (p, h) in [(5, 5), (6, 5)] {
        let text = pigeonhole(p, h);
        let formula = parse_dimacs(&text).unwrap();
        let result = solve(&formula, &SolverConfig::default());
        println!(
            "{p} pigeons, {h} holes: {} vars, {} clauses -> {} ({} conflicts)",
            formula.num_vars(),
            formula.num_clauses(),
            result.status,
            result.stats.conflicts
        );
    }
}
