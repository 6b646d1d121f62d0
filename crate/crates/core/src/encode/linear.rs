//! One-dimensional problems on a line grid: pathwidth, bandwidth and
//! st-orientations with few levels.

use super::{finish, grid_len, unique_position, EncodeError, EncodeOptions, Encoding, Params, Problem};
use crate::boxmodel::{decode_box, encode_box, encode_cells, GridDims, TAG_NONEMPTY};
use crate::cnf::{Assignment, CnfBuilder, Lit, ObjectId};
use crate::graph::Graph;
use crate::layout::{Layout1D, Orientation};

const TAG_PW_EDGE_POINT: &str = "pathwidth.edge-point";
const TAG_PW_EDGE_INSIDE: &str = "pathwidth.edge-inside-endpoints";
const TAG_PW_WIDTH: &str = "pathwidth.width";
const TAG_BW_ONE_PER_POINT: &str = "bandwidth.one-per-point";
const TAG_BW_STRETCH: &str = "bandwidth.stretch";
const TAG_ST_ONE_POINT: &str = "st.one-point";
const TAG_ST_EDGE_LENGTH: &str = "st.edge-length";
const TAG_ST_EDGE_ENDS: &str = "st.edge-ends";
const TAG_ST_OUTGOING: &str = "st.outgoing";
const TAG_ST_INCOMING: &str = "st.incoming";

/// Intervals on `[1,n]` for the vertices, an edge point inside both
/// endpoint intervals for every edge, and at most `p + 1` intervals through
/// any point. Satisfiable iff the pathwidth is at most `p`.
pub fn encode_pathwidth(g: &Graph, p: usize, opts: &EncodeOptions) -> Result<Encoding, EncodeError> {
    let n = grid_len(g.n().max(1), "grid length")?;
    let dims = GridDims::line(n);
    let params = Params { p: Some(p), ..Default::default() };
    let mut enc = Encoding::new(Problem::Pathwidth, params, *opts, dims.clone());
    let mut b = CnfBuilder::new(opts.config);

    for v in 0..g.n() {
        enc.vertex_boxes.push(encode_box(&mut b, &dims, ObjectId::Vertex(v as u32))?);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let xe = encode_cells(&mut b, &dims, ObjectId::Edge(e as u32))?;
        b.at_least(&xe.lits(), 1, TAG_PW_EDGE_POINT)?;
        for cell in dims.cells() {
            for w in [u, v] {
                b.add_clause(&[!xe.at(cell), enc.vertex_boxes[w].at(cell)], TAG_PW_EDGE_INSIDE);
            }
        }
        enc.edge_cells.push(xe);
    }
    if g.n() > 0 {
        for cell in dims.cells() {
            let column: Vec<Lit> = enc.vertex_boxes.iter().map(|vb| vb.at(cell)).collect();
            b.at_most(&column, p + 1, TAG_PW_WIDTH)?;
        }
    }
    Ok(finish(enc, b))
}

pub fn decode_pathwidth(enc: &Encoding, assignment: &Assignment) -> Result<Layout1D, EncodeError> {
    enc.check_assignment(assignment)?;
    let intervals = enc
        .vertex_boxes
        .iter()
        .map(|vb| decode_box(vb, &enc.dims, assignment).map(|bx| bx.bounds[0]))
        .collect::<Result<_, _>>()?;
    Ok(Layout1D { intervals })
}

/// Vertices on distinct points of `[1,n]` with adjacent vertices at most
/// `k` apart. Satisfiable iff the bandwidth is at most `k`.
pub fn encode_bandwidth(g: &Graph, k: usize, opts: &EncodeOptions) -> Result<Encoding, EncodeError> {
    let n = grid_len(g.n().max(1), "grid length")?;
    let dims = GridDims::line(n);
    let params = Params { k: Some(k), ..Default::default() };
    let mut enc = Encoding::new(Problem::Bandwidth, params, *opts, dims.clone());
    let mut b = CnfBuilder::new(opts.config);

    for v in 0..g.n() {
        let xv = encode_cells(&mut b, &dims, ObjectId::Vertex(v as u32))?;
        b.at_least(&xv.lits(), 1, TAG_NONEMPTY)?;
        enc.vertex_cells.push(xv);
    }
    if g.n() > 0 {
        for cell in dims.cells() {
            let column: Vec<Lit> = enc.vertex_cells.iter().map(|xv| xv.at(cell)).collect();
            b.at_most(&column, 1, TAG_BW_ONE_PER_POINT)?;
        }
    }
    let last = n as usize - 1;
    let mut clause = Vec::new();
    for &(u, v) in g.edges() {
        for (a, c) in [(u, v), (v, u)] {
            for i in 0..=last {
                clause.clear();
                clause.push(!enc.vertex_cells[a].at(i as u32));
                for j in i.saturating_sub(k)..=(i + k).min(last) {
                    clause.push(enc.vertex_cells[c].at(j as u32));
                }
                b.add_clause(&clause, TAG_BW_STRETCH);
            }
        }
    }
    Ok(finish(enc, b))
}

/// Positions of the vertices, as zero-length intervals.
pub fn decode_bandwidth(enc: &Encoding, assignment: &Assignment) -> Result<Layout1D, EncodeError> {
    enc.check_assignment(assignment)?;
    let positions = enc
        .vertex_cells
        .iter()
        .map(|xv| unique_position(xv, assignment))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Layout1D::from_positions(&positions))
}

/// Levels `1..=k` for the vertices and an interval of length at least one
/// per edge, spanning the levels of its endpoints. Every vertex other than
/// `t` starts an edge and every vertex other than `s` ends one, so a
/// solution is an st-orientation whose directed paths have at most `k - 1`
/// edges.
pub fn encode_st_orientation(
    g: &Graph,
    s: usize,
    t: usize,
    k: usize,
    opts: &EncodeOptions,
) -> Result<Encoding, EncodeError> {
    for x in [s, t] {
        if x >= g.n() {
            return Err(EncodeError::InvalidParameter(format!(
                "vertex {x} out of range for {} vertices",
                g.n()
            )));
        }
    }
    if s == t {
        return Err(EncodeError::SameSourceSink(s));
    }
    if !g.has_edge(s, t) {
        return Err(EncodeError::MissingStEdge { s, t });
    }
    let levels = grid_len(k, "level count")?;
    let dims = GridDims::line(levels);
    let params = Params {
        k: Some(k),
        s: Some(s),
        t: Some(t),
        ..Default::default()
    };
    let mut enc = Encoding::new(Problem::StOrientation, params, *opts, dims.clone());
    let mut b = CnfBuilder::new(opts.config);

    for v in 0..g.n() {
        let xv = encode_cells(&mut b, &dims, ObjectId::Vertex(v as u32))?;
        b.at_least(&xv.lits(), 1, TAG_NONEMPTY)?;
        b.at_most(&xv.lits(), 1, TAG_ST_ONE_POINT)?;
        enc.vertex_cells.push(xv);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let eb = encode_box(&mut b, &dims, ObjectId::Edge(e as u32))?;
        b.at_least(&eb.cell_vars().lits(), 2, TAG_ST_EDGE_LENGTH)?;
        for c in 1..=levels {
            let cell = c - 1;
            let (xu, xv) = (enc.vertex_cells[u].at(cell), enc.vertex_cells[v].at(cell));
            b.add_clause(&[!eb.begin_at(0, c), xu, xv], TAG_ST_EDGE_ENDS);
            b.add_clause(&[!eb.end_at(0, c), xu, xv], TAG_ST_EDGE_ENDS);
        }
        enc.edge_boxes.push(eb);
    }
    let mut clause = Vec::new();
    for v in 0..g.n() {
        let incident = g.incident_edges(v);
        for c in 1..=levels {
            let cell = c - 1;
            if v != t {
                clause.clear();
                clause.push(!enc.vertex_cells[v].at(cell));
                clause.extend(incident.iter().map(|&e| enc.edge_boxes[e].begin_at(0, c)));
                b.add_clause(&clause, TAG_ST_OUTGOING);
            }
            if v != s {
                clause.clear();
                clause.push(!enc.vertex_cells[v].at(cell));
                clause.extend(incident.iter().map(|&e| enc.edge_boxes[e].end_at(0, c)));
                b.add_clause(&clause, TAG_ST_INCOMING);
            }
        }
    }
    Ok(finish(enc, b))
}

/// Directs every edge from the endpoint at its begin level to the endpoint
/// at its end level.
pub fn decode_orientation(
    g: &Graph,
    enc: &Encoding,
    assignment: &Assignment,
) -> Result<Orientation, EncodeError> {
    enc.check_assignment(assignment)?;
    let levels = enc
        .vertex_cells
        .iter()
        .map(|xv| unique_position(xv, assignment))
        .collect::<Result<Vec<_>, _>>()?;
    let mut arcs = Vec::with_capacity(g.m());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (lo, hi) = decode_box(&enc.edge_boxes[e], &enc.dims, assignment)?.bounds[0];
        let arc = if (levels[u], levels[v]) == (lo, hi) {
            (u, v)
        } else if (levels[v], levels[u]) == (lo, hi) {
            (v, u)
        } else {
            return Err(EncodeError::Decode(format!(
                "edge {u}-{v} spans levels {lo}..{hi} but its endpoints sit at {} and {}",
                levels[u], levels[v]
            )));
        };
        arcs.push(arc);
    }
    Ok(Orientation { arcs, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::binomial;
    use crate::graph::generators::{complete, cycle, path, star};
    use crate::sat::{solve, SolveStatus, SolverConfig};

    fn sat(enc: &Encoding) -> Option<Assignment> {
        let r = solve(&enc.formula, &SolverConfig::default());
        assert_ne!(r.status, SolveStatus::Timeout);
        r.assignment
    }

    fn opts() -> EncodeOptions {
        EncodeOptions::default()
    }

    #[test]
    fn pathwidth_examples() {
        let k4 = complete(4);
        assert!(sat(&encode_pathwidth(&k4, 2, &opts()).unwrap()).is_none());
        assert!(sat(&encode_pathwidth(&k4, 3, &opts()).unwrap()).is_some());
        assert!(sat(&encode_pathwidth(&path(5), 1, &opts()).unwrap()).is_some());
        let c5 = cycle(5);
        assert!(sat(&encode_pathwidth(&c5, 1, &opts()).unwrap()).is_none());
        let enc = encode_pathwidth(&c5, 2, &opts()).unwrap();
        let layout = decode_pathwidth(&enc, &sat(&enc).unwrap()).unwrap();
        for &(u, v) in c5.edges() {
            let (a, b) = (layout.intervals[u], layout.intervals[v]);
            assert!(a.0 <= b.1 && b.0 <= a.1);
        }
    }

    #[test]
    fn pathwidth_tiny_graphs_decode() {
        let one = Graph::empty(1);
        let enc = encode_pathwidth(&one, 0, &opts()).unwrap();
        assert_eq!(decode_pathwidth(&enc, &sat(&enc).unwrap()).unwrap().intervals, vec![(1, 1)]);
        let edge = path(2);
        let enc = encode_pathwidth(&edge, 1, &opts()).unwrap();
        let l = decode_pathwidth(&enc, &sat(&enc).unwrap()).unwrap();
        let (a, b) = (l.intervals[0], l.intervals[1]);
        assert!(a.0 <= b.1 && b.0 <= a.1);
    }

    fn pathwidth_clause_formula(n: usize, m: usize, p: usize) -> usize {
        let c2 = binomial(n, 2) as usize;
        n * (1 + 2 * (c2 + 1) + 2 * n) + m * (1 + 2 * n) + n * binomial(n, p + 2) as usize
    }

    #[test]
    fn pathwidth_counts_are_pinned() {
        // golden values from the first run, cross-checked against the
        // closed forms 3n^2 + mn variables and the per-constraint sums
        let cases = [(path(4), 1, 60, 135), (cycle(5), 2, 100, 245), (star(4), 1, 95, 259)];
        for (g, p, vars, clauses) in cases {
            let enc = encode_pathwidth(&g, p, &opts()).unwrap();
            let (n, m) = (g.n(), g.m());
            assert_eq!(enc.num_vars(), 3 * n * n + m * n);
            assert_eq!(enc.num_clauses(), pathwidth_clause_formula(n, m, p));
            assert_eq!((enc.num_vars(), enc.num_clauses()), (vars, clauses));
        }
    }

    #[test]
    fn pathwidth_capacity_guard() {
        let mut o = opts();
        o.config.clause_limit = 10;
        let err = encode_pathwidth(&complete(8), 1, &o).unwrap_err();
        assert!(err.to_string().contains("limit"), "{err}");
    }

    #[test]
    fn bandwidth_examples() {
        let enc = encode_bandwidth(&path(6), 1, &opts()).unwrap();
        let l = decode_bandwidth(&enc, &sat(&enc).unwrap()).unwrap();
        let pos = l.positions();
        for &(u, v) in path(6).edges() {
            assert!(pos[u].abs_diff(pos[v]) <= 1);
        }
        assert!(sat(&encode_bandwidth(&complete(4), 2, &opts()).unwrap()).is_none());
        assert!(sat(&encode_bandwidth(&complete(4), 3, &opts()).unwrap()).is_some());
        assert!(sat(&encode_bandwidth(&cycle(5), 1, &opts()).unwrap()).is_none());
        assert!(sat(&encode_bandwidth(&cycle(5), 2, &opts()).unwrap()).is_some());
    }

    #[test]
    fn bandwidth_positions_distinct() {
        let enc = encode_bandwidth(&cycle(6), 2, &opts()).unwrap();
        let mut pos = decode_bandwidth(&enc, &sat(&enc).unwrap()).unwrap().positions();
        pos.sort_unstable();
        assert_eq!(pos, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn st_rejects_bad_terminals() {
        let g = path(3);
        assert!(matches!(
            encode_st_orientation(&g, 1, 1, 3, &opts()),
            Err(EncodeError::SameSourceSink(1))
        ));
        assert!(matches!(
            encode_st_orientation(&g, 0, 2, 3, &opts()),
            Err(EncodeError::MissingStEdge { s: 0, t: 2 })
        ));
        assert!(encode_st_orientation(&g, 0, 9, 3, &opts()).is_err());
    }

    #[test]
    fn st_triangle_and_k4() {
        for (s, t) in [(0, 1), (2, 0), (1, 2)] {
            let k3 = complete(3);
            assert!(sat(&encode_st_orientation(&k3, s, t, 2, &opts()).unwrap()).is_none());
            let enc = encode_st_orientation(&k3, s, t, 3, &opts()).unwrap();
            let o = decode_orientation(&k3, &enc, &sat(&enc).unwrap()).unwrap();
            let mut levels = o.levels.clone();
            levels.sort_unstable();
            assert_eq!(levels, vec![1, 2, 3]);
            assert_eq!(o.levels[s], 1);
            assert_eq!(o.levels[t], 3);
            for &(a, b) in &o.arcs {
                assert!(o.levels[a] < o.levels[b]);
            }
        }
        let k4 = complete(4);
        assert!(sat(&encode_st_orientation(&k4, 0, 3, 3, &opts()).unwrap()).is_none());
        assert!(sat(&encode_st_orientation(&k4, 0, 3, 4, &opts()).unwrap()).is_some());
    }

    #[test]
    fn st_chorded_square() {
        // s=0, a=1, t=2, b=3: cycle s-a-t-b-s plus the chord st
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        assert!(sat(&encode_st_orientation(&g, 0, 2, 2, &opts()).unwrap()).is_none());
        assert!(sat(&encode_st_orientation(&g, 0, 2, 3, &opts()).unwrap()).is_some());
    }

    #[test]
    fn st_single_edge() {
        let g = path(2);
        assert!(sat(&encode_st_orientation(&g, 0, 1, 1, &opts()).unwrap()).is_none());
        let enc = encode_st_orientation(&g, 1, 0, 2, &opts()).unwrap();
        let o = decode_orientation(&g, &enc, &sat(&enc).unwrap()).unwrap();
        assert_eq!(o.arcs, vec![(1, 0)]);
    }
}
