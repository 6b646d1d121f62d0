//! K5 is not planar, so it has no bar visibility layout; allowing each edge
//! to cross one vertex bar changes that.

use gridsat::encode::{encode_bar_visibility, EncodeOptions, Problem};
use gridsat::graph::generators::complete;
use gridsat::sat::{solve, Backend, SolverConfig};
use gridsat::search::{solve_min_parameter, Query};

fn main() {
    let k5 = complete(5);
    let plain = encode_bar_visibility(&k5, 5, 6, &EncodeOptions::default()).unwrap();
    let result = solve(&plain.formula, &SolverConfig::default());
    println!("bar visibility, 5x6 grid: {} ({} vars, {} clauses)", result.status, plain.num_vars(), plain.num_clauses());

    let mut query = Query::new(Problem::BarKVisibility);
    query.crossings = 1;
    let outcome = solve_min_parameter(&query, &k5, (1, 8), None, &Backend::default()).expect("search");
    println!("bar 1-visibility at height 5: status {}, width {:?}", outcome.status.as_str(), outcome.optimum);
}
