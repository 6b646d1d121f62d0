//! Minimum pathwidth of a few small graphs, with the interval layout found.

use gridsat::graph::generators::{complete, cycle, path};
use gridsat::layout::Solution;
use gridsat::sat::Backend;
use gridsat::search::{default_bounds, solve_min_parameter, Query};
use gridsat::encode::Problem;

fn main() {
    let query = Query::new(Problem::Pathwidth);
    let backend = Backend::default();
    for g in [path(5).with_name("P5"), cycle(5).with_name("C5"), complete(4).with_name("K4")] {
        let bounds = default_bounds(&query, &g);
        let outcome = solve_min_parameter(&query, &g, bounds, None, &backend).expect("search");
        println!("{}: pathwidth {:?} after {} iterations", outcome.graph_id, outcome.optimum, outcome.iterations.len());
        if let Some(Solution::Intervals(layout)) = outcome.solution {
            for (v, (s, t)) in layout.intervals.iter().enumerate() {
                println!("  vertex {v}: [{s}, {t}]");
            }
        }
    }
}
