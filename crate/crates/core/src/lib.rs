//! Satisfiability for two-variable first-order logic through the conditional
//! independent set problem.
//!
//! Pipeline: a Scott-normal-form sentence ([`fo2`]) is, if it uses equality,
//! rewritten into an equality-free one ([`eq_elim`]); its 1-types and their
//! compatibilities are compiled into a [`graph_system::GraphSystem`]; a good
//! independent set of that system is searched for; and on success a finite
//! model is assembled and checked ([`model`]).

pub mod benchgen;
pub mod bitset;
pub mod budget;
pub mod eq_elim;
pub mod error;
pub mod fo2;
pub mod graph_system;
pub mod model;
pub mod oracle;
pub mod solver;

pub use bitset::VertexSet;
pub use budget::Budget;
pub use error::{Error, Result};
pub use graph_system::{GraphSystem, SolveReport, Verdict};
