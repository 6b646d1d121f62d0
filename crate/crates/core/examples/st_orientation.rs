//! st-orientations with the fewest levels.

use gridsat::encode::Problem;
use gridsat::graph::generators::complete;
use gridsat::graph::Graph;
use gridsat::layout::Solution;
use gridsat::sat::Backend;
use gridsat::search::{default_bounds, solve_min_parameter, Query};

fn main() {
    // s=0, t=2 on a 4-cycle with the chord st
    let chorded = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    for (name, g, s, t) in [("chorded square", chorded, 0, 2), ("K4", complete(4), 0, 3)] {
        let query = Query::new(Problem::StOrientation).with_terminals(s, t);
        let outcome = solve_min_parameter(&query, &g, default_bounds(&query, &g), None, &Backend::default())
            .expect("search");
        let levels = outcome.optimum.expect("an st-orientation exists");
        println!("{name}: {levels} levels, longest path {} edges", levels - 1);
        if let Some(Solution::Orientation(o)) = outcome.solution {
            for (tail, head) in o.arcs {
                println!("  {tail} -> {head}   (levels {} -> {})", o.levels[tail], o.levels[head]);
            }
        }
    }
}
