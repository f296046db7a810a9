//! Core machinery for relational graph properties: a small specification
//! language, a reference evaluator, CNF grounding at a fixed size, an
//! embedded SAT engine with model enumeration and sampling, and a
//! brute-force oracle for small sizes.
//!
//! The adjacency layout is shared by every layer: a graph on `n` nodes is
//! the `n*n`-bit row-major string where bit `i*n + j` encodes edge
//! `i -> j`, and CNF variable `i*n + j + 1` is that same bit.

pub mod bits;
pub mod cnf;
pub mod dsl;
pub mod eval;
pub mod graph;
pub mod oracle;
pub mod sat;

pub use bits::BitString;
pub use cnf::{ground, negate_and_ground, Cnf};
pub use dsl::{builtin_catalog, find_property, parse, Formula, PropertyCategory, PropertyDef};
pub use eval::{check, count_satisfying};
pub use graph::{DirectedGraph, EdgeIndex, GraphError};
pub use sat::{
    add_symmetry_breaking, enumerate, sample, solve, SolveConfig, SolveMode, SolverError,
};
