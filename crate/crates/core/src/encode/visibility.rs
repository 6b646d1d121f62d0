//! Bar visibility and bar k-visibility on an `H × W` grid. Dimension 1
//! (index 0) runs over rows, dimension 2 over columns.

use super::{finish, grid_len, EncodeError, EncodeOptions, Encoding, Params, Problem};
use crate::boxmodel::{constrain_flat, decode_box, encode_box, CellVars, GridDims};
use crate::cnf::{Assignment, CnfBuilder, Lit, ObjectId, VarName};
use crate::graph::Graph;
use crate::layout::{HBar, Layout2D, VBar};

const ROW: usize = 0;
const COL: usize = 1;

const TAG_FLAT_VERTEX: &str = "vis.vertex-height-one";
const TAG_FLAT_EDGE: &str = "vis.edge-width-one";
const TAG_VERTEX_DISJOINT: &str = "vis.vertices-disjoint";
const TAG_NO_CROSSING: &str = "vis.no-crossing";
const TAG_INCIDENCE: &str = "vis.incidence";
const TAG_INCIDENCE_EXISTS: &str = "vis.incidence-exists";
const TAG_EDGE_ENDS: &str = "vis.edge-ends-at-incidence";
const TAG_CROSSING_FLAG: &str = "bar-k.crossing-flag";
pub(crate) const TAG_CROSSING_BUDGET: &str = "bar-k.crossing-budget";
const TAG_EDGE_OVERLAP: &str = "bar-k.edge-overlap";

/// Horizontal vertex bars and vertical edge bars where every edge bar meets
/// both endpoint bars and no other vertex bar.
pub fn encode_bar_visibility(
    g: &Graph,
    height: u32,
    width: u32,
    opts: &EncodeOptions,
) -> Result<Encoding, EncodeError> {
    encode(g, height, width, None, opts)
}

/// As bar visibility, but each edge bar may cross up to `k` non-incident
/// vertex bars; edge bars may only share points at their ends.
pub fn encode_bar_k_visibility(
    g: &Graph,
    height: u32,
    width: u32,
    k: usize,
    opts: &EncodeOptions,
) -> Result<Encoding, EncodeError> {
    encode(g, height, width, Some(k), opts)
}

fn encode(
    g: &Graph,
    height: u32,
    width: u32,
    crossings: Option<usize>,
    opts: &EncodeOptions,
) -> Result<Encoding, EncodeError> {
    let height = grid_len(height as usize, "height")?;
    let width = grid_len(width as usize, "width")?;
    let dims = GridDims::new(vec![height, width])?;
    let params = Params {
        k: crossings,
        height: Some(height),
        width: Some(width),
        ..Default::default()
    };
    let problem = match crossings {
        None => Problem::BarVisibility,
        Some(_) => Problem::BarKVisibility,
    };
    let mut enc = Encoding::new(problem, params, *opts, dims.clone());
    let mut b = CnfBuilder::new(opts.config);

    for v in 0..g.n() {
        let vb = encode_box(&mut b, &dims, ObjectId::Vertex(v as u32))?;
        constrain_flat(&mut b, &vb, ROW, TAG_FLAT_VERTEX);
        enc.vertex_boxes.push(vb);
    }
    for e in 0..g.m() {
        let eb = encode_box(&mut b, &dims, ObjectId::Edge(e as u32))?;
        constrain_flat(&mut b, &eb, COL, TAG_FLAT_EDGE);
        enc.edge_boxes.push(eb);
    }
    if g.n() > 1 {
        for cell in dims.cells() {
            let column: Vec<Lit> = enc.vertex_boxes.iter().map(|vb| vb.at(cell)).collect();
            b.at_most(&column, 1, TAG_VERTEX_DISJOINT)?;
        }
    }

    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let object = ObjectId::Edge(e as u32);
        let mut pair = Vec::with_capacity(2);
        for w in [u, v] {
            let cells = dims
                .cells()
                .map(|cell| {
                    b.new_var(VarName::Incidence {
                        edge: e as u32,
                        vertex: w as u32,
                        cell,
                    })
                })
                .collect::<Result<_, _>>()?;
            let inc = CellVars { object, cells };
            for cell in dims.cells() {
                b.add_clause(&[!inc.at(cell), enc.edge_boxes[e].at(cell)], TAG_INCIDENCE);
                b.add_clause(&[!inc.at(cell), enc.vertex_boxes[w].at(cell)], TAG_INCIDENCE);
                if opts.sten {
                    let row = dims.coord(cell, ROW);
                    let eb = &enc.edge_boxes[e];
                    b.add_clause(
                        &[!inc.at(cell), eb.begin_at(ROW, row), eb.end_at(ROW, row)],
                        TAG_EDGE_ENDS,
                    );
                }
            }
            b.at_least(&inc.lits(), 1, TAG_INCIDENCE_EXISTS)?;
            pair.push(inc);
        }
        let second = pair.pop().expect("two endpoints");
        let first = pair.pop().expect("two endpoints");
        enc.incidences.push([first, second]);

        let ys = match crossings {
            None => None,
            Some(_) => {
                let cells = dims
                    .cells()
                    .map(|cell| b.new_var(VarName::Crossing { edge: e as u32, cell }))
                    .collect::<Result<_, _>>()?;
                Some(CellVars { object, cells })
            }
        };
        for w in (0..g.n()).filter(|&w| w != u && w != v) {
            for cell in dims.cells() {
                let xe = enc.edge_boxes[e].at(cell);
                let xw = enc.vertex_boxes[w].at(cell);
                match &ys {
                    None => b.add_clause(&[!xe, !xw], TAG_NO_CROSSING),
                    Some(y) => b.add_clause(&[!xe, !xw, y.at(cell)], TAG_CROSSING_FLAG),
                }
            }
        }
        if let (Some(y), Some(k)) = (ys, crossings) {
            b.at_most(&y.lits(), k, TAG_CROSSING_BUDGET)?;
            enc.crossings.push(y);
        }
    }

    if crossings.is_some() {
        for e in 0..g.m() {
            for f in (0..g.m()).filter(|&f| f != e) {
                for cell in dims.cells() {
                    let row = dims.coord(cell, ROW);
                    let (eb, fb) = (&enc.edge_boxes[e], &enc.edge_boxes[f]);
                    b.add_clause(
                        &[!eb.at(cell), !fb.at(cell), eb.begin_at(ROW, row), eb.end_at(ROW, row)],
                        TAG_EDGE_OVERLAP,
                    );
                }
            }
        }
    }
    Ok(finish(enc, b))
}

/// Reads bars from the boxes. When edge ends were not tied to incidences,
/// each edge bar is cut back to the rows of its endpoint bars.
pub fn decode_layout2d(g: &Graph, enc: &Encoding, assignment: &Assignment) -> Result<Layout2D, EncodeError> {
    enc.check_assignment(assignment)?;
    let mut vertex_bars = Vec::with_capacity(g.n());
    for vb in &enc.vertex_boxes {
        let bx = decode_box(vb, &enc.dims, assignment)?;
        vertex_bars.push(HBar {
            row: bx.bounds[ROW].0,
            cols: bx.bounds[COL],
        });
    }
    let mut edge_bars = Vec::with_capacity(g.m());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let bx = decode_box(&enc.edge_boxes[e], &enc.dims, assignment)?;
        let mut rows = bx.bounds[ROW];
        if !enc.options.sten {
            let (ru, rv) = (vertex_bars[u].row, vertex_bars[v].row);
            rows = (ru.min(rv), ru.max(rv));
        }
        edge_bars.push(VBar {
            col: bx.bounds[COL].0,
            rows,
        });
    }
    Ok(Layout2D {
        height: enc.dims.size(ROW),
        width: enc.dims.size(COL),
        vertex_bars,
        edge_bars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, path};
    use crate::sat::{solve, SolveStatus, SolverConfig};

    fn run(enc: &Encoding) -> Option<Assignment> {
        let r = solve(&enc.formula, &SolverConfig::default());
        assert_ne!(r.status, SolveStatus::Timeout);
        r.assignment
    }

    #[test]
    fn single_edge_stacked() {
        let g = path(2);
        let enc = encode_bar_visibility(&g, 2, 1, &EncodeOptions::default()).unwrap();
        let layout = decode_layout2d(&g, &enc, &run(&enc).unwrap()).unwrap();
        let mut rows: Vec<u32> = layout.vertex_bars.iter().map(|b| b.row).collect();
        rows.sort_unstable();
        assert_eq!(rows, vec![1, 2]);
        assert_eq!(layout.edge_bars, vec![VBar { col: 1, rows: (1, 2) }]);
        assert!(run(&encode_bar_visibility(&g, 1, 3, &EncodeOptions::default()).unwrap()).is_none());
    }

    #[test]
    fn path_of_three_needs_room() {
        let g = path(3);
        let k0 = encode_bar_visibility(&g, 3, 1, &EncodeOptions::default()).unwrap();
        assert!(run(&k0).is_some());
        let k1 = encode_bar_k_visibility(&g, 3, 1, 1, &EncodeOptions::default()).unwrap();
        assert!(run(&k1).is_some());
    }

    #[test]
    fn triangle_with_and_without_end_constraint() {
        let g = complete(3);
        for sten in [true, false] {
            let opts = EncodeOptions { sten, ..Default::default() };
            let enc = encode_bar_visibility(&g, 3, 2, &opts).unwrap();
            let layout = decode_layout2d(&g, &enc, &run(&enc).unwrap()).unwrap();
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let bar = layout.edge_bars[e];
                let ends = [layout.vertex_bars[u].row, layout.vertex_bars[v].row];
                assert_eq!(bar.rows, (ends[0].min(ends[1]), ends[0].max(ends[1])));
            }
            assert!(run(&encode_bar_visibility(&g, 3, 1, &opts).unwrap()).is_none());
        }
    }

    #[test]
    fn vertex_bars_are_flat() {
        let g = complete(4);
        let enc = encode_bar_visibility(&g, 4, 4, &EncodeOptions::default()).unwrap();
        let a = run(&enc).unwrap();
        for vb in &enc.vertex_boxes {
            let bx = decode_box(vb, &enc.dims, &a).unwrap();
            assert_eq!(bx.bounds[ROW].0, bx.bounds[ROW].1);
        }
        for eb in &enc.edge_boxes {
            let bx = decode_box(eb, &enc.dims, &a).unwrap();
            assert_eq!(bx.bounds[COL].0, bx.bounds[COL].1);
        }
    }

    #[test]
    fn crossing_budget_guard_names_constraint() {
        let opts = EncodeOptions {
            config: crate::cnf::EncoderConfig { clause_limit: 100, ..Default::default() },
            sten: true,
        };
        let err = encode_bar_k_visibility(&complete(3), 6, 6, 2, &opts).unwrap_err();
        assert!(err.to_string().contains(TAG_CROSSING_BUDGET), "{err}");
    }
}
