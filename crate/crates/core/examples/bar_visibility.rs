//! Narrowest bar visibility layout of K4 at height 4, printed as text and
//! written as SVG to the system temp directory.

use gridsat::encode::Problem;
use gridsat::graph::generators::complete;
use gridsat::layout::{Layout2D, Solution};
use gridsat::sat::Backend;
use gridsat::search::{default_bounds, solve_min_parameter, Query};
use gridsat::svg::{render_svg, SvgOptions};

fn draw(layout: &Layout2D) {
    let mut rows = vec![vec!['.'; layout.width as usize]; layout.height as usize];
    for (v, bar) in layout.vertex_bars.iter().enumerate() {
        for c in bar.cols.0..=bar.cols.1 {
            rows[bar.row as usize - 1][c as usize - 1] = char::from(b'A' + v as u8);
        }
    }
    for bar in &layout.edge_bars {
        for r in bar.rows.0 + 1..bar.rows.1 {
            rows[r as usize - 1][bar.col as usize - 1] = '|';
        }
    }
    for row in rows {
        println!("  {}", row.into_iter().collect::<String>());
    }
}

fn main() {
    let g = complete(4);
    let query = Query::new(Problem::BarVisibility);
    let outcome = solve_min_parameter(&query, &g, default_bounds(&query, &g), None, &Backend::default())
        .expect("search");
    println!("K4 at height 4: minimum width {:?}", outcome.optimum);
    if let Some(solution @ Solution::Bars(layout)) = &outcome.solution {
        draw(layout);
        let path = std::env::temp_dir().join("k4_bars.svg");
        std::fs::write(&path, render_svg(solution, SvgOptions { grid_lines: true }).unwrap()).unwrap();
        println!("SVG written to {}", path.display());
    }
}
