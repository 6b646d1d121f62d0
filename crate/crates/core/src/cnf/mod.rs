//! Propositional variables, clause storage, and the constraint-to-clause
//! translations used by every encoder.

mod cardinality;
mod dimacs;

use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

use serde::Serialize;
use thiserror::Error;

pub use cardinality::{binomial, CardinalityEncoding};
pub use dimacs::{parse_dimacs, to_dimacs, DimacsOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("variable {0:?} is already registered")]
    DuplicateName(VarName),
    #[error("variable {0:?} is not registered")]
    UnknownName(VarName),
    #[error("constraint `{constraint}` needs at least one literal")]
    EmptyConstraint { constraint: &'static str },
    #[error("constraint `{constraint}` would emit {estimated} clauses, above the limit of {limit}")]
    Capacity {
        constraint: &'static str,
        estimated: u128,
        limit: u64,
    },
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VarId(u32);

impl VarId {
    pub fn new(index: u32) -> VarId {
        assert!(index >= 1, "variables are numbered from 1");
        VarId(index)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position, for indexing dense arrays.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

/// A literal packed as `2 * (var - 1) + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: VarId, positive: bool) -> Lit {
        Lit(((var.0 - 1) << 1) | u32::from(!positive))
    }

    pub fn from_code(code: u32) -> Lit {
        Lit(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn var(self) -> VarId {
        VarId((self.0 >> 1) + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0);
        Lit::new(VarId(value.unsigned_abs()), value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl From<VarId> for Lit {
    fn from(v: VarId) -> Lit {
        v.positive()
    }
}

/// A total truth assignment over variables `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment(values)
    }

    pub fn all_false(num_vars: usize) -> Assignment {
        Assignment(vec![false; num_vars])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Unknown variables read as false.
    pub fn value(&self, var: VarId) -> bool {
        self.0.get(var.index()).copied().unwrap_or(false)
    }

    pub fn set(&mut self, var: VarId, value: bool) {
        if var.index() >= self.0.len() {
            self.0.resize(var.index() + 1, false);
        }
        self.0[var.index()] = value;
    }

    pub fn lit(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// DIMACS-style model: one signed literal per variable.
    pub fn to_dimacs_model(&self) -> Vec<i32> {
        (1..=self.0.len() as i32)
            .map(|v| if self.0[v as usize - 1] { v } else { -v })
            .collect()
    }
}

/// What a box or point family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ObjectId {
    Vertex(u32),
    Edge(u32),
}

/// Structured variable names. Grid points are stored as linear cell
/// indices of the grid the encoding was built on; coordinates of begin/end
/// indicators are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarName {
    /// `x_i(o)`: grid point `cell` belongs to object `o`.
    Cell { object: ObjectId, cell: u32 },
    /// `b_i^k(o)`: the box of `o` begins at coordinate `coord` in dimension `dim`.
    Begin { object: ObjectId, dim: u8, coord: u32 },
    /// `e_i^k(o)`: the box of `o` ends at coordinate `coord` in dimension `dim`.
    End { object: ObjectId, dim: u8, coord: u32 },
    /// `x_i(e, v)`: edge `edge` meets its endpoint `vertex` at `cell`.
    Incidence { edge: u32, vertex: u32, cell: u32 },
    /// `y_i(e)`: edge `edge` crosses a non-incident vertex at `cell`.
    Crossing { edge: u32, cell: u32 },
    /// Auxiliary variable introduced by a cardinality encoding.
    Counter(u32),
}

/// Injective map from structured names to consecutive variable ids.
#[derive(Debug, Clone, Default)]
pub struct VarRegistry {
    by_name: HashMap<VarName, VarId>,
    names: Vec<VarName>,
}

impl VarRegistry {
    pub fn new() -> VarRegistry {
        VarRegistry::default()
    }

    pub fn new_var(&mut self, name: VarName) -> Result<VarId, CnfError> {
        if self.by_name.contains_key(&name) {
            return Err(CnfError::DuplicateName(name));
        }
        let id = VarId(self.names.len() as u32 + 1);
        self.by_name.insert(name, id);
        self.names.push(name);
        Ok(id)
    }

    pub fn lookup(&self, name: &VarName) -> Result<VarId, CnfError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or(CnfError::UnknownName(*name))
    }

    pub fn name(&self, var: VarId) -> &VarName {
        &self.names[var.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A CNF clause database with flat literal storage.
///
/// Each clause may carry the name of the constraint family that produced it;
/// tags are stored run-length encoded since encoders emit families in blocks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    lits: Vec<Lit>,
    starts: Vec<usize>,
    tags: Vec<(usize, &'static str)>,
    contradiction: Option<&'static str>,
}

impl CnfFormula {
    pub fn new() -> CnfFormula {
        CnfFormula {
            starts: vec![0],
            ..Default::default()
        }
    }

    pub fn with_vars(num_vars: usize) -> CnfFormula {
        let mut f = CnfFormula::new();
        f.num_vars = num_vars;
        f
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.starts.len() - 1
    }

    /// Makes room for variables up to `num_vars`.
    pub fn ensure_vars(&mut self, num_vars: usize) {
        self.num_vars = self.num_vars.max(num_vars);
    }

    pub fn add_clause(&mut self, clause: &[Lit]) {
        self.add_tagged(clause, "");
    }

    pub fn add_tagged(&mut self, clause: &[Lit], tag: &'static str) {
        debug_assert!(!clause.is_empty(), "use mark_contradiction for empty clauses");
        for lit in clause {
            self.num_vars = self.num_vars.max(lit.var().get() as usize);
        }
        let index = self.num_clauses();
        if self.tags.last().map(|&(_, t)| t) != Some(tag) {
            self.tags.push((index, tag));
        }
        self.lits.extend_from_slice(clause);
        self.starts.push(self.lits.len());
    }

    /// Records that the formula is unsatisfiable by construction. An empty
    /// clause is stored so that solvers and DIMACS output see it.
    pub fn mark_contradiction(&mut self, tag: &'static str) {
        if self.contradiction.is_none() {
            self.contradiction = Some(tag);
        }
        let index = self.num_clauses();
        if self.tags.last().map(|&(_, t)| t) != Some(tag) {
            self.tags.push((index, tag));
        }
        self.starts.push(self.lits.len());
    }

    pub fn contradiction(&self) -> Option<&'static str> {
        self.contradiction
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        &self.lits[self.starts[index]..self.starts[index + 1]]
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &[Lit]> + '_ {
        (0..self.num_clauses()).map(move |i| self.clause(i))
    }

    /// Constraint family that emitted clause `index` (empty if untagged).
    pub fn tag(&self, index: usize) -> &'static str {
        match self.tags.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.tags[pos].1,
            Err(0) => "",
            Err(pos) => self.tags[pos - 1].1,
        }
    }

    /// Number of clauses per tag, in first-emission order.
    pub fn tag_counts(&self) -> Vec<(&'static str, usize)> {
        let mut counts: Vec<(&'static str, usize)> = Vec::new();
        for (pos, &(start, tag)) in self.tags.iter().enumerate() {
            let end = self
                .tags
                .get(pos + 1)
                .map_or(self.num_clauses(), |&(next, _)| next);
            match counts.iter_mut().find(|(t, _)| *t == tag) {
                Some(entry) => entry.1 += end - start,
                None => counts.push((tag, end - start)),
            }
        }
        counts
    }

    /// Index of the first clause the assignment falsifies.
    pub fn first_falsified(&self, assignment: &Assignment) -> Option<usize> {
        (0..self.num_clauses()).find(|&i| !self.clause(i).iter().any(|&l| assignment.lit(l)))
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.first_falsified(assignment).is_none()
    }

    pub fn num_literals(&self) -> usize {
        self.lits.len()
    }
}

/// Knobs shared by all constraint translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderConfig {
    pub cardinality: CardinalityEncoding,
    /// Upper bound on the clauses a single constraint may generate.
    pub clause_limit: u64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            cardinality: CardinalityEncoding::Binomial,
            clause_limit: 10_000_000,
        }
    }
}

/// Registry and formula built together, one per encoding session.
#[derive(Debug, Clone, Default)]
pub struct CnfBuilder {
    pub registry: VarRegistry,
    pub formula: CnfFormula,
    pub config: EncoderConfig,
    counters: u32,
}

impl CnfBuilder {
    pub fn new(config: EncoderConfig) -> CnfBuilder {
        CnfBuilder {
            registry: VarRegistry::new(),
            formula: CnfFormula::new(),
            config,
            counters: 0,
        }
    }

    pub fn new_var(&mut self, name: VarName) -> Result<VarId, CnfError> {
        let id = self.registry.new_var(name)?;
        self.formula.ensure_vars(id.get() as usize);
        Ok(id)
    }

    pub(crate) fn new_aux(&mut self) -> VarId {
        self.counters += 1;
        self.new_var(VarName::Counter(self.counters))
            .expect("counter names are fresh")
    }

    pub fn add_clause(&mut self, clause: &[Lit], tag: &'static str) {
        self.formula.add_tagged(clause, tag);
    }

    pub fn into_parts(self) -> (CnfFormula, VarRegistry) {
        (self.formula, self.registry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(i: u32) -> VarName {
        VarName::Cell {
            object: ObjectId::Vertex(0),
            cell: i,
        }
    }

    #[test]
    fn registry_numbers_consecutively() {
        let mut reg = VarRegistry::new();
        assert_eq!(reg.new_var(name(0)).unwrap(), VarId::new(1));
        assert_eq!(reg.new_var(name(1)).unwrap(), VarId::new(2));
        assert_eq!(reg.new_var(name(0)), Err(CnfError::DuplicateName(name(0))));
        assert_eq!(reg.lookup(&name(1)).unwrap(), VarId::new(2));
        assert!(reg.lookup(&name(7)).is_err());
        assert_eq!(reg.name(VarId::new(1)), &name(0));
    }

    #[test]
    fn literal_negation_is_involution() {
        let l = VarId::new(5).negative();
        assert_eq!(!!l, l);
        assert_eq!(l.to_dimacs(), -5);
        assert_eq!(Lit::from_dimacs(-5), l);
        assert_eq!((!l).to_dimacs(), 5);
    }

    #[test]
    fn tags_are_tracked_per_clause() {
        let mut f = CnfFormula::new();
        let a = VarId::new(1).positive();
        let b = VarId::new(2).positive();
        f.add_tagged(&[a], "one");
        f.add_tagged(&[b], "one");
        f.add_tagged(&[a, b], "two");
        f.add_tagged(&[!a], "one");
        assert_eq!(f.tag(0), "one");
        assert_eq!(f.tag(2), "two");
        assert_eq!(f.tag(3), "one");
        assert_eq!(f.tag_counts(), vec![("one", 3), ("two", 1)]);
        assert_eq!(f.num_vars(), 2);
    }

    #[test]
    fn contradiction_stores_empty_clause() {
        let mut f = CnfFormula::new();
        f.mark_contradiction("c");
        assert_eq!(f.num_clauses(), 1);
        assert!(f.clause(0).is_empty());
        assert!(!f.is_satisfied_by(&Assignment::default()));
    }
}
