//! Bandwidth by scanning k upward, compared with a brute-force oracle.

use gridsat::encode::Problem;
use gridsat::graph::generators::{complete, cycle, star};
use gridsat::layout::Solution;
use gridsat::sat::Backend;
use gridsat::search::{default_bounds, solve_min_parameter, Query};
use gridsat::verify::{oracle_bandwidth, OracleLimits};

fn main() {
    let query = Query::new(Problem::Bandwidth);
    for g in [cycle(6), star(5), complete(5)] {
        let outcome = solve_min_parameter(&query, &g, default_bounds(&query, &g), None, &Backend::default())
            .expect("search");
        let oracle = oracle_bandwidth(&g, &OracleLimits::default()).expect("small graph");
        let order = match &outcome.solution {
            Some(Solution::Intervals(layout)) => layout.positions(),
            _ => Vec::new(),
        };
        println!(
            "n={} m={}: bandwidth {:?} (oracle {oracle}), positions {order:?}",
            g.n(),
            g.m(),
            outcome.optimum
        );
    }
}
