//! Problem encodings on top of the grid box model, each paired with a
//! decoder from satisfying assignments to layouts.

mod boxicity;
mod linear;
mod visibility;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::boxmodel::{BoxError, BoxVarSet, CellVars, GridDims};
use crate::cnf::{Assignment, CnfBuilder, CnfError, CnfFormula, EncoderConfig, VarRegistry};

pub use boxicity::{decode_boxicity, encode_boxicity};
pub use linear::{
    decode_bandwidth, decode_orientation, decode_pathwidth, encode_bandwidth, encode_pathwidth,
    encode_st_orientation,
};
pub use visibility::{decode_layout2d, encode_bar_k_visibility, encode_bar_visibility};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("source and sink must differ (both are {0})")]
    SameSourceSink(usize),
    #[error("graph has no edge between source {s} and sink {t}; add it before encoding")]
    MissingStEdge { s: usize, t: usize },
    #[error("cannot decode assignment: {0}")]
    Decode(String),
    #[error(transparent)]
    Box(#[from] BoxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Pathwidth,
    Bandwidth,
    StOrientation,
    BarVisibility,
    BarKVisibility,
    Boxicity,
}

impl Problem {
    pub const ALL: [Problem; 6] = [
        Problem::Pathwidth,
        Problem::Bandwidth,
        Problem::StOrientation,
        Problem::BarVisibility,
        Problem::BarKVisibility,
        Problem::Boxicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Pathwidth => "pathwidth",
            Problem::Bandwidth => "bandwidth",
            Problem::StOrientation => "st-orientation",
            Problem::BarVisibility => "bar-visibility",
            Problem::BarKVisibility => "bar-k-visibility",
            Problem::Boxicity => "boxicity",
        }
    }

    /// Two-dimensional problems get the longer default timeout.
    pub fn is_two_dimensional(self) -> bool {
        matches!(
            self,
            Problem::BarVisibility | Problem::BarKVisibility | Problem::Boxicity
        )
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

/// Parameter values an encoding was built with. Only the fields relevant
/// to the problem are set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOptions {
    pub config: EncoderConfig,
    /// Bar visibility: force edge bars to start and end at their
    /// incidence points. Without it the decoder trims edge bars instead.
    pub sten: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            config: EncoderConfig::default(),
            sten: true,
        }
    }
}

/// A formula together with the variable families needed to decode it.
/// Each variable of the registry belongs to exactly one family (or to a
/// cardinality counter).
#[derive(Debug, Clone)]
pub struct Encoding {
    pub problem: Problem,
    pub params: Params,
    pub options: EncodeOptions,
    pub dims: GridDims,
    pub formula: CnfFormula,
    pub registry: VarRegistry,
    pub vertex_boxes: Vec<BoxVarSet>,
    pub vertex_cells: Vec<CellVars>,
    pub edge_boxes: Vec<BoxVarSet>,
    pub edge_cells: Vec<CellVars>,
    /// `x_i(e, u)` and `x_i(e, v)` for edge `e = (u, v)`, `u < v`.
    pub incidences: Vec<[CellVars; 2]>,
    pub crossings: Vec<CellVars>,
}

impl Encoding {
    fn new(problem: Problem, params: Params, options: EncodeOptions, dims: GridDims) -> Encoding {
        Encoding {
            problem,
            params,
            options,
            dims,
            formula: CnfFormula::new(),
            registry: VarRegistry::new(),
            vertex_boxes: Vec::new(),
            vertex_cells: Vec::new(),
            edge_boxes: Vec::new(),
            edge_cells: Vec::new(),
            incidences: Vec::new(),
            crossings: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.formula.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.formula.num_clauses()
    }

    fn check_assignment(&self, assignment: &Assignment) -> Result<(), EncodeError> {
        if assignment.len() < self.formula.num_vars() {
            return Err(EncodeError::Decode(format!(
                "assignment covers {} of {} variables",
                assignment.len(),
                self.formula.num_vars()
            )));
        }
        Ok(())
    }
}

fn finish(mut enc: Encoding, builder: CnfBuilder) -> Encoding {
    let (formula, registry) = builder.into_parts();
    enc.formula = formula;
    enc.registry = registry;
    enc
}

fn grid_len(n: usize, what: &str) -> Result<u32, EncodeError> {
    match u32::try_from(n) {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(EncodeError::InvalidParameter(format!("{what} must be in 1..=2^32-1, got {n}"))),
    }
}

/// The single true cell of a point family, as a 1-based position on a line.
fn unique_position(vars: &CellVars, assignment: &Assignment) -> Result<u32, EncodeError> {
    match vars.true_cells(assignment).as_slice() {
        [c] => Ok(c + 1),
        other => Err(EncodeError::Decode(format!(
            "{:?} occupies cells {other:?}, expected exactly one",
            vars.object
        ))),
    }
}
