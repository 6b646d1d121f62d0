//! Decoded solutions. These types are shared by the decoders, the verifiers
//! and the renderers; they carry data only.

use serde::Serialize;

/// One closed integer interval per vertex. Point layouts (bandwidth orders)
/// use intervals of length zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout1D {
    pub intervals: Vec<(u32, u32)>,
}

impl Layout1D {
    pub fn from_positions(positions: &[u32]) -> Layout1D {
        Layout1D {
            intervals: positions.iter().map(|&p| (p, p)).collect(),
        }
    }

    /// Left endpoints, i.e. the positions of a point layout.
    pub fn positions(&self) -> Vec<u32> {
        self.intervals.iter().map(|&(s, _)| s).collect()
    }
}

/// Edge directions plus the level of each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// `(tail, head)` for every edge, indexed like `Graph::edges`.
    pub arcs: Vec<(usize, usize)>,
    pub levels: Vec<u32>,
}

/// Horizontal vertex bar: one row, a column range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HBar {
    pub row: u32,
    pub cols: (u32, u32),
}

/// Vertical edge bar: one column, a row range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VBar {
    pub col: u32,
    pub rows: (u32, u32),
}

/// A bar (k-)visibility layout on a `height × width` grid. Rows run from 1
/// at the top to `height`, columns from 1 to `width`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout2D {
    pub height: u32,
    pub width: u32,
    pub vertex_bars: Vec<HBar>,
    pub edge_bars: Vec<VBar>,
}

/// One box per vertex on `[1, side]^d`; `bounds[k] = (s_k, t_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxLayout {
    pub side: u32,
    pub boxes: Vec<Vec<(u32, u32)>>,
}

/// Any decoded solution, tagged by its shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    Intervals(Layout1D),
    Orientation(Orientation),
    Bars(Layout2D),
    Boxes(BoxLayout),
}
