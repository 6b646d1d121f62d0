//! SAT encodings of grid-box graph problems, a built-in CDCL solver, and
//! independent verifiers for the decoded layouts.

pub mod boxmodel;
pub mod cli;
pub mod cnf;
pub mod encode;
pub mod graph;
pub mod layout;
pub mod report;
pub mod sat;
pub mod search;
pub mod svg;
pub mod verify;
