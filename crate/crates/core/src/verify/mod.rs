//! Independent checks of decoded layouts, and brute-force oracles for
//! small instances. Nothing here touches the encoders; only the graph and
//! layout types are shared.

mod oracle;

use std::fmt;

use crate::graph::Graph;
use crate::layout::{BoxLayout, Layout1D, Layout2D, Orientation};

pub use oracle::{
    oracle_bandwidth, oracle_boxicity_d, oracle_pathwidth, oracle_st_levels, OracleError, OracleLimits,
};

/// Why a layout was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

macro_rules! reject {
    ($($arg:tt)*) => {
        return Err(Violation(format!($($arg)*)))
    };
}

fn check_count(what: &str, got: usize, want: usize) -> Result<(), Violation> {
    if got != want {
        reject!("{what}: expected {want} entries, got {got}");
    }
    Ok(())
}

fn overlap(a: (u32, u32), b: (u32, u32)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Every edge joins two intersecting intervals and no integer point lies
/// in more than `p + 1` intervals.
pub fn verify_pathwidth(g: &Graph, layout: &Layout1D, p: usize) -> Result<(), Violation> {
    check_count("intervals", layout.intervals.len(), g.n())?;
    for (v, &(s, t)) in layout.intervals.iter().enumerate() {
        if s == 0 || s > t {
            reject!("vertex {v} has malformed interval [{s},{t}]");
        }
    }
    for &(u, v) in g.edges() {
        if !overlap(layout.intervals[u], layout.intervals[v]) {
            reject!(
                "edge {u}-{v}: intervals {:?} and {:?} are disjoint",
                layout.intervals[u], layout.intervals[v]
            );
        }
    }
    let hi = layout.intervals.iter().map(|iv| iv.1).max().unwrap_or(0);
    for x in 1..=hi {
        let load = layout.intervals.iter().filter(|iv| iv.0 <= x && x <= iv.1).count();
        if load > p + 1 {
            reject!("point {x} lies in {load} intervals, more than {}", p + 1);
        }
    }
    Ok(())
}

/// Positions are pairwise distinct and adjacent vertices are at most `k`
/// apart.
pub fn verify_bandwidth(g: &Graph, positions: &[u32], k: usize) -> Result<(), Violation> {
    check_count("positions", positions.len(), g.n())?;
    let mut seen = positions.to_vec();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        reject!("position {} is used twice", w[0]);
    }
    for &(u, v) in g.edges() {
        let stretch = positions[u].abs_diff(positions[v]) as usize;
        if stretch > k {
            reject!("edge {u}-{v} has length {stretch} > {k}");
        }
    }
    Ok(())
}

/// The arcs orient every edge once, form a DAG with `s` as the only source
/// and `t` as the only sink, and no directed path has more than `k - 1`
/// arcs.
pub fn verify_st_orientation(
    g: &Graph,
    orientation: &Orientation,
    s: usize,
    t: usize,
    k: usize,
) -> Result<(), Violation> {
    let n = g.n();
    check_count("arcs", orientation.arcs.len(), g.m())?;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (&(a, b), &(u, v)) in orientation.arcs.iter().zip(g.edges()) {
        if !((a, b) == (u, v) || (a, b) == (v, u)) {
            reject!("arc {a}->{b} does not orient edge {u}-{v}");
        }
        out[a].push(b);
        indeg[b] += 1;
    }
    let sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let sinks: Vec<usize> = (0..n).filter(|&v| out[v].is_empty()).collect();
    if sources != [s] {
        reject!("sources are {sources:?}, expected only {s}");
    }
    if sinks != [t] {
        reject!("sinks are {sinks:?}, expected only {t}");
    }
    // Kahn's algorithm; longest[v] = arcs on the longest path ending at v
    let mut remaining = indeg.clone();
    let mut queue: Vec<usize> = sources;
    let mut longest = vec![0usize; n];
    let mut visited = 0;
    while let Some(v) = queue.pop() {
        visited += 1;
        for &w in &out[v] {
            longest[w] = longest[w].max(longest[v] + 1);
            remaining[w] -= 1;
            if remaining[w] == 0 {
                queue.push(w);
            }
        }
    }
    if visited != n {
        reject!("orientation has a directed cycle");
    }
    let path = longest.into_iter().max().unwrap_or(0);
    if path + 1 > k {
        reject!("longest directed path has {path} arcs, more than {}", k.saturating_sub(1));
    }
    Ok(())
}

/// Vertex bars are disjoint, each edge bar runs between the rows of its
/// endpoint bars and touches both, crosses at most `k` other vertex bars,
/// and meets other edge bars only in a shared end on a common vertex bar.
pub fn verify_bar_visibility(g: &Graph, layout: &Layout2D, k: usize) -> Result<(), Violation> {
    check_count("vertex bars", layout.vertex_bars.len(), g.n())?;
    check_count("edge bars", layout.edge_bars.len(), g.m())?;
    let (h, w) = (layout.height, layout.width);
    for (v, bar) in layout.vertex_bars.iter().enumerate() {
        if bar.row == 0 || bar.row > h || bar.cols.0 == 0 || bar.cols.0 > bar.cols.1 || bar.cols.1 > w {
            reject!("vertex bar {v} {bar:?} is malformed or outside the {h}x{w} grid");
        }
    }
    for (e, bar) in layout.edge_bars.iter().enumerate() {
        if bar.col == 0 || bar.col > w || bar.rows.0 == 0 || bar.rows.0 > bar.rows.1 || bar.rows.1 > h {
            reject!("edge bar {e} {bar:?} is malformed or outside the {h}x{w} grid");
        }
    }
    let vb = &layout.vertex_bars;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if vb[u].row == vb[v].row && overlap(vb[u].cols, vb[v].cols) {
                reject!("vertex bars {u} and {v} overlap");
            }
        }
    }
    for (e, (&(u, v), bar)) in g.edges().iter().zip(&layout.edge_bars).enumerate() {
        let ends = (vb[u].row.min(vb[v].row), vb[u].row.max(vb[v].row));
        if bar.rows != ends {
            reject!("edge bar {e} spans rows {:?}, its endpoints sit on rows {ends:?}", bar.rows);
        }
        for x in [u, v] {
            if !(vb[x].cols.0 <= bar.col && bar.col <= vb[x].cols.1) {
                reject!("edge bar {e} in column {} misses vertex bar {x}", bar.col);
            }
        }
        let crossed = (0..g.n())
            .filter(|&x| x != u && x != v)
            .filter(|&x| {
                bar.rows.0 <= vb[x].row
                    && vb[x].row <= bar.rows.1
                    && vb[x].cols.0 <= bar.col
                    && bar.col <= vb[x].cols.1
            })
            .count();
        if crossed > k {
            reject!("edge bar {e} crosses {crossed} vertex bars, more than {k}");
        }
    }
    let eb = &layout.edge_bars;
    for e in 0..g.m() {
        for f in e + 1..g.m() {
            if eb[e].col != eb[f].col || !overlap(eb[e].rows, eb[f].rows) {
                continue;
            }
            let lo = eb[e].rows.0.max(eb[f].rows.0);
            let hi = eb[e].rows.1.min(eb[f].rows.1);
            let (a, b) = (g.edges()[e], g.edges()[f]);
            let shared_end = lo == hi
                && [a.0, a.1]
                    .into_iter()
                    .any(|x| (x == b.0 || x == b.1) && vb[x].row == lo);
            if !shared_end {
                reject!("edge bars {e} and {f} overlap on rows {lo}..={hi} in column {}", eb[e].col);
            }
        }
    }
    Ok(())
}

/// Boxes lie in `[1,side]^d` and intersect exactly for the adjacent pairs.
pub fn verify_boxicity(g: &Graph, layout: &BoxLayout) -> Result<(), Violation> {
    check_count("boxes", layout.boxes.len(), g.n())?;
    let d = layout.boxes.first().map_or(0, Vec::len);
    for (v, bx) in layout.boxes.iter().enumerate() {
        if bx.len() != d || d == 0 {
            reject!("box {v} has {} dimensions, expected {d} >= 1", bx.len());
        }
        if bx.iter().any(|&(s, t)| s == 0 || s > t || t > layout.side) {
            reject!("box {v} {bx:?} is malformed or outside [1,{}]^{d}", layout.side);
        }
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let meet = layout.boxes[u].iter().zip(&layout.boxes[v]).all(|(&a, &b)| overlap(a, b));
            if meet != g.has_edge(u, v) {
                reject!(
                    "boxes {u} and {v} {} but the vertices are {}adjacent",
                    if meet { "intersect" } else { "are disjoint" },
                    if g.has_edge(u, v) { "" } else { "not " }
                );
            }
        }
    }
    Ok(())
}
