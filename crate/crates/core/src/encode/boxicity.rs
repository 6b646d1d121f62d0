//! Boxes on `[1,side]^d` whose intersection graph is the input graph.

use super::{finish, grid_len, EncodeError, EncodeOptions, Encoding, Params, Problem};
use crate::boxmodel::{decode_box, encode_box, encode_cells, GridDims};
use crate::cnf::{Assignment, CnfBuilder, ObjectId};
use crate::graph::Graph;
use crate::layout::BoxLayout;

const TAG_EDGE_POINT: &str = "boxicity.edge-point";
const TAG_EDGE_INSIDE: &str = "boxicity.edge-inside-endpoints";
const TAG_NON_ADJACENT: &str = "boxicity.non-adjacent-disjoint";

pub fn encode_boxicity(g: &Graph, d: usize, side: u32, opts: &EncodeOptions) -> Result<Encoding, EncodeError> {
    if d == 0 {
        return Err(EncodeError::InvalidParameter("dimension must be at least 1".into()));
    }
    let side = grid_len(side as usize, "side")?;
    let dims = GridDims::cube(side, d)?;
    let params = Params {
        d: Some(d),
        side: Some(side),
        ..Default::default()
    };
    let mut enc = Encoding::new(Problem::Boxicity, params, *opts, dims.clone());
    let mut b = CnfBuilder::new(opts.config);

    for v in 0..g.n() {
        enc.vertex_boxes.push(encode_box(&mut b, &dims, ObjectId::Vertex(v as u32))?);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let xe = encode_cells(&mut b, &dims, ObjectId::Edge(e as u32))?;
        b.at_least(&xe.lits(), 1, TAG_EDGE_POINT)?;
        for cell in dims.cells() {
            for w in [u, v] {
                b.add_clause(&[!xe.at(cell), enc.vertex_boxes[w].at(cell)], TAG_EDGE_INSIDE);
            }
        }
        enc.edge_cells.push(xe);
    }
    for u in 0..g.n() {
        for v in (u + 1..g.n()).filter(|&v| !g.has_edge(u, v)) {
            for cell in dims.cells() {
                b.add_clause(
                    &[!enc.vertex_boxes[u].at(cell), !enc.vertex_boxes[v].at(cell)],
                    TAG_NON_ADJACENT,
                );
            }
        }
    }
    Ok(finish(enc, b))
}

pub fn decode_boxicity(enc: &Encoding, assignment: &Assignment) -> Result<BoxLayout, EncodeError> {
    enc.check_assignment(assignment)?;
    let boxes = enc
        .vertex_boxes
        .iter()
        .map(|vb| decode_box(vb, &enc.dims, assignment).map(|bx| bx.bounds))
        .collect::<Result<_, _>>()?;
    Ok(BoxLayout {
        side: enc.dims.size(0),
        boxes,
    })
}
