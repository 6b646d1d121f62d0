//! Axis-aligned boxes on an integer grid, encoded with cell, begin and end
//! indicator variables.
//!
//! For an object `o` on the grid `[1,U_1] × … × [1,U_d]` the encoding uses
//!
//! * `x_i(o)` for every grid point `i`,
//! * `b^k_c(o)` and `e^k_c(o)` for every dimension `k` and coordinate `c`,
//!
//! and requires: at least one `x` is true; exactly one `b^k` and one `e^k`
//! per dimension; a point in the box whose predecessor along `k` is not in
//! the box forces `b^k` at its coordinate, and symmetrically for `e^k`.
//! Points outside the grid count as false, so the clauses at the border
//! simply lose their neighbour literal.

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{Assignment, CnfBuilder, CnfError, Lit, ObjectId, VarId, VarName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoxError {
    #[error("grid needs at least one dimension, each of size >= 1")]
    InvalidDims,
    #[error("inconsistent box for {object:?}: {message}")]
    Inconsistent { object: ObjectId, message: String },
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
}

/// Sizes `U_1..U_d` of the grid `[1,U_1] × … × [1,U_d]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridDims {
    sizes: Vec<u32>,
    #[serde(skip)]
    strides: Vec<u32>,
}

impl GridDims {
    pub fn new(sizes: Vec<u32>) -> Result<GridDims, BoxError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(BoxError::InvalidDims);
        }
        let mut strides = Vec::with_capacity(sizes.len());
        let mut acc = 1u32;
        for &u in &sizes {
            strides.push(acc);
            acc = acc.checked_mul(u).ok_or(BoxError::InvalidDims)?;
        }
        Ok(GridDims { sizes, strides })
    }

    pub fn line(len: u32) -> GridDims {
        GridDims::new(vec![len]).expect("positive length")
    }

    pub fn cube(side: u32, d: usize) -> Result<GridDims, BoxError> {
        GridDims::new(vec![side; d])
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, k: usize) -> u32 {
        self.sizes[k]
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn num_cells(&self) -> usize {
        self.sizes.iter().map(|&u| u as usize).product()
    }

    /// Linear index of a point given by 1-based coordinates.
    pub fn cell(&self, coords: &[u32]) -> u32 {
        debug_assert_eq!(coords.len(), self.dim());
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c - 1) * s)
            .sum()
    }

    /// 1-based coordinate of `cell` along dimension `k`.
    pub fn coord(&self, cell: u32, k: usize) -> u32 {
        cell / self.strides[k] % self.sizes[k] + 1
    }

    pub fn coords(&self, cell: u32) -> Vec<u32> {
        (0..self.dim()).map(|k| self.coord(cell, k)).collect()
    }

    /// Neighbour one step back along `k`, if inside the grid.
    pub fn prev(&self, cell: u32, k: usize) -> Option<u32> {
        (self.coord(cell, k) > 1).then(|| cell - self.strides[k])
    }

    /// Neighbour one step forward along `k`, if inside the grid.
    pub fn next(&self, cell: u32, k: usize) -> Option<u32> {
        (self.coord(cell, k) < self.sizes[k]).then(|| cell + self.strides[k])
    }

    pub fn cells(&self) -> std::ops::Range<u32> {
        0..self.num_cells() as u32
    }
}

/// A non-empty box `[s_1,t_1] × … × [s_d,t_d]` with 1-based inclusive bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GridBox {
    pub bounds: Vec<(u32, u32)>,
}

impl GridBox {
    pub fn new(bounds: Vec<(u32, u32)>) -> GridBox {
        debug_assert!(bounds.iter().all(|&(s, t)| 1 <= s && s <= t));
        GridBox { bounds }
    }

    pub fn point(coords: &[u32]) -> GridBox {
        GridBox::new(coords.iter().map(|&c| (c, c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, coords: &[u32]) -> bool {
        self.bounds
            .iter()
            .zip(coords)
            .all(|(&(s, t), &c)| s <= c && c <= t)
    }

    pub fn intersects(&self, other: &GridBox) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .all(|(&(s1, t1), &(s2, t2))| s1 <= t2 && s2 <= t1)
    }

    pub fn volume(&self) -> usize {
        self.bounds.iter().map(|&(s, t)| (t - s + 1) as usize).product()
    }

    pub fn fits(&self, dims: &GridDims) -> bool {
        self.dim() == dims.dim()
            && self
                .bounds
                .iter()
                .zip(dims.sizes())
                .all(|(&(s, t), &u)| s >= 1 && s <= t && t <= u)
    }
}

/// Variables of one object's point family (`x` only).
#[derive(Debug, Clone)]
pub struct CellVars {
    pub object: ObjectId,
    pub cells: Vec<VarId>,
}

impl CellVars {
    pub fn lits(&self) -> Vec<Lit> {
        self.cells.iter().map(|v| v.positive()).collect()
    }

    pub fn at(&self, cell: u32) -> Lit {
        self.cells[cell as usize].positive()
    }

    /// Linear indices of the true cells.
    pub fn true_cells(&self, assignment: &Assignment) -> Vec<u32> {
        (0..self.cells.len() as u32)
            .filter(|&c| assignment.value(self.cells[c as usize]))
            .collect()
    }
}

/// Variables of one object's full box: `x` per cell plus `b^k`, `e^k` per
/// dimension and coordinate. `begin[k][c - 1]` is `b^{k+1}_c`.
#[derive(Debug, Clone)]
pub struct BoxVarSet {
    pub object: ObjectId,
    pub cells: Vec<VarId>,
    pub begin: Vec<Vec<VarId>>,
    pub end: Vec<Vec<VarId>>,
}

impl BoxVarSet {
    pub fn cell_vars(&self) -> CellVars {
        CellVars {
            object: self.object,
            cells: self.cells.clone(),
        }
    }

    pub fn at(&self, cell: u32) -> Lit {
        self.cells[cell as usize].positive()
    }

    /// `b^k_c` with 0-based dimension `k` and 1-based coordinate `c`.
    pub fn begin_at(&self, k: usize, c: u32) -> Lit {
        self.begin[k][c as usize - 1].positive()
    }

    pub fn end_at(&self, k: usize, c: u32) -> Lit {
        self.end[k][c as usize - 1].positive()
    }

    pub fn all_vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.cells
            .iter()
            .chain(self.begin.iter().flatten())
            .chain(self.end.iter().flatten())
            .copied()
    }
}

pub const TAG_NONEMPTY: &str = "box.nonempty";
pub const TAG_ONE_BEGIN: &str = "box.one-begin";
pub const TAG_ONE_END: &str = "box.one-end";
pub const TAG_START: &str = "box.start";
pub const TAG_END: &str = "box.end";

/// Registers `x` variables for every cell, without any constraint.
pub fn encode_cells(
    builder: &mut CnfBuilder,
    dims: &GridDims,
    object: ObjectId,
) -> Result<CellVars, CnfError> {
    let cells = dims
        .cells()
        .map(|cell| builder.new_var(VarName::Cell { object, cell }))
        .collect::<Result<_, _>>()?;
    Ok(CellVars { object, cells })
}

/// Registers the full box family for `object` and emits its shape clauses.
pub fn encode_box(
    builder: &mut CnfBuilder,
    dims: &GridDims,
    object: ObjectId,
) -> Result<BoxVarSet, CnfError> {
    let cells = encode_cells(builder, dims, object)?.cells;
    let mut begin = Vec::with_capacity(dims.dim());
    let mut end = Vec::with_capacity(dims.dim());
    for k in 0..dims.dim() {
        let dim = k as u8 + 1;
        let b = (1..=dims.size(k))
            .map(|coord| builder.new_var(VarName::Begin { object, dim, coord }))
            .collect::<Result<Vec<_>, _>>()?;
        let e = (1..=dims.size(k))
            .map(|coord| builder.new_var(VarName::End { object, dim, coord }))
            .collect::<Result<Vec<_>, _>>()?;
        begin.push(b);
        end.push(e);
    }
    let vars = BoxVarSet {
        object,
        cells,
        begin,
        end,
    };

    let xs: Vec<Lit> = vars.cells.iter().map(|v| v.positive()).collect();
    builder.at_least(&xs, 1, TAG_NONEMPTY)?;
    for k in 0..dims.dim() {
        let b: Vec<Lit> = vars.begin[k].iter().map(|v| v.positive()).collect();
        let e: Vec<Lit> = vars.end[k].iter().map(|v| v.positive()).collect();
        builder.exactly(&b, 1, TAG_ONE_BEGIN)?;
        builder.exactly(&e, 1, TAG_ONE_END)?;
    }
    let mut clause = Vec::with_capacity(3);
    for k in 0..dims.dim() {
        for cell in dims.cells() {
            let c = dims.coord(cell, k);
            clause.clear();
            clause.push(!vars.at(cell));
            if let Some(p) = dims.prev(cell, k) {
                clause.push(vars.at(p));
            }
            clause.push(vars.begin_at(k, c));
            builder.add_clause(&clause, TAG_START);
        }
        for cell in dims.cells() {
            let c = dims.coord(cell, k);
            clause.clear();
            clause.push(!vars.at(cell));
            if let Some(nx) = dims.next(cell, k) {
                clause.push(vars.at(nx));
            }
            clause.push(vars.end_at(k, c));
            builder.add_clause(&clause, TAG_END);
        }
    }
    Ok(vars)
}

/// `b^k_c = e^k_c` for every coordinate `c`: the box has extent 1 along `k`.
pub fn constrain_flat(builder: &mut CnfBuilder, vars: &BoxVarSet, k: usize, tag: &'static str) {
    for (b, e) in vars.begin[k].iter().zip(&vars.end[k]) {
        builder.add_clause(&[b.negative(), e.positive()], tag);
        builder.add_clause(&[b.positive(), e.negative()], tag);
    }
}

/// Restricts the box to a single grid point.
pub fn constrain_point(builder: &mut CnfBuilder, vars: &BoxVarSet, tag: &'static str) {
    for k in 0..vars.begin.len() {
        constrain_flat(builder, vars, k, tag);
    }
}

fn unique_true(
    vars: &[VarId],
    assignment: &Assignment,
    object: ObjectId,
    what: &str,
) -> Result<u32, BoxError> {
    let hits: Vec<u32> = (1..=vars.len() as u32)
        .filter(|&c| assignment.value(vars[c as usize - 1]))
        .collect();
    match hits.as_slice() {
        [c] => Ok(*c),
        _ => Err(BoxError::Inconsistent {
            object,
            message: format!("{what} indicators true at {hits:?}"),
        }),
    }
}

/// Reads the box from the begin/end indicators and checks that the true
/// cells are exactly its points.
pub fn decode_box(
    vars: &BoxVarSet,
    dims: &GridDims,
    assignment: &Assignment,
) -> Result<GridBox, BoxError> {
    let mut bounds = Vec::with_capacity(dims.dim());
    for k in 0..dims.dim() {
        let s = unique_true(&vars.begin[k], assignment, vars.object, &format!("begin[{}]", k + 1))?;
        let t = unique_true(&vars.end[k], assignment, vars.object, &format!("end[{}]", k + 1))?;
        if s > t {
            return Err(BoxError::Inconsistent {
                object: vars.object,
                message: format!("dimension {} begins at {s} after it ends at {t}", k + 1),
            });
        }
        bounds.push((s, t));
    }
    let decoded = GridBox::new(bounds);
    for cell in dims.cells() {
        let inside = decoded.contains(&dims.coords(cell));
        if assignment.value(vars.cells[cell as usize]) != inside {
            return Err(BoxError::Inconsistent {
                object: vars.object,
                message: format!(
                    "cell {:?} is {} but the box is {:?}",
                    dims.coords(cell),
                    if inside { "unset" } else { "set" },
                    decoded.bounds
                ),
            });
        }
    }
    Ok(decoded)
}

/// Writes the canonical assignment of `grid_box` into `assignment`: its cells,
/// `b^k_{s_k}` and `e^k_{t_k}` true, every other variable of `vars` false.
pub fn assign_box(vars: &BoxVarSet, dims: &GridDims, grid_box: &GridBox, assignment: &mut Assignment) {
    for v in vars.all_vars() {
        assignment.set(v, false);
    }
    for cell in dims.cells() {
        if grid_box.contains(&dims.coords(cell)) {
            assignment.set(vars.cells[cell as usize], true);
        }
    }
    for (k, &(s, t)) in grid_box.bounds.iter().enumerate() {
        assignment.set(vars.begin[k][s as usize - 1], true);
        assignment.set(vars.end[k][t as usize - 1], true);
    }
}

/// One end of a real interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoint {
    pub value: f64,
    pub closed: bool,
}

/// A non-empty real interval with open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl RealInterval {
    pub fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Result<RealInterval, BoxError> {
        let ok = lo.is_finite() && hi.is_finite() && (lo < hi || (lo == hi && lo_closed && hi_closed));
        if !ok {
            return Err(BoxError::InvalidInterval(format!(
                "{}{lo}, {hi}{}",
                if lo_closed { '[' } else { '(' },
                if hi_closed { ']' } else { ')' }
            )));
        }
        Ok(RealInterval {
            lo: Endpoint { value: lo, closed: lo_closed },
            hi: Endpoint { value: hi, closed: hi_closed },
        })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<RealInterval, BoxError> {
        RealInterval::new(lo, true, hi, true)
    }
}

/// A box in `R^d` as a product of real intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealBox {
    pub intervals: Vec<RealInterval>,
}

/// Maps `n` real boxes to closed integer boxes on `[1,n]^d` with the same
/// pairwise intersection relation.
///
/// Each dimension is handled on its own. Endpoints are sorted by value; ties
/// put open right ends first, then closed left ends, closed right ends, and
/// open left ends. The sorted sequence is then cut after every right end,
/// each piece (a run of left ends followed by one right end) gets the next
/// integer, and every endpoint takes the number of its piece.
pub fn normalize_boxes(boxes: &[RealBox]) -> Vec<GridBox> {
    let Some(first) = boxes.first() else {
        return Vec::new();
    };
    let d = first.intervals.len();
    let mut bounds = vec![vec![(0u32, 0u32); d]; boxes.len()];
    for k in 0..d {
        // (value, tie rank, is_right, box)
        let mut events: Vec<(f64, u8, bool, usize)> = Vec::with_capacity(2 * boxes.len());
        for (i, b) in boxes.iter().enumerate() {
            let iv = &b.intervals[k];
            events.push((iv.lo.value, if iv.lo.closed { 1 } else { 3 }, false, i));
            events.push((iv.hi.value, if iv.hi.closed { 2 } else { 0 }, true, i));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.3.cmp(&b.3)));
        let mut group = 1u32;
        for (_, _, is_right, i) in events {
            if is_right {
                bounds[i][k].1 = group;
                group += 1;
            } else {
                bounds[i][k].0 = group;
            }
        }
    }
    bounds.into_iter().map(GridBox::new).collect()
}
