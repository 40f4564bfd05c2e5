//! Rainbow matchings in edge-coloured multigraphs whose colour classes are
//! disjoint unions of nontrivial cliques (equivalently: tuples of equivalence
//! relations with bounded kernels).
//!
//! The crate provides:
//!
//! * the instance/matching/switching model with validation predicates,
//! * exact, greedy and switching-based solvers, plus a recursion that follows
//!   the colour-reduction argument step by step and records a trace,
//! * extremal and random instance generators,
//! * a stochastic falsifier and an exhaustive minimal-kernel search,
//! * the correspondence between clique-union relations and finite set
//!   algebras, with exhaustive power-set verification on small ground sets.

pub mod algebra;
pub mod counting;
pub mod delta;
pub mod error;
pub mod generate;
pub mod hypothesis;
pub mod instance;
pub mod json;
pub mod matching;
pub mod solve;
pub mod switching;
pub mod vertex_set;

pub use delta::Delta;
pub use error::{Error, Result};
pub use instance::{ColourClass, ColourId, Element, Instance, ValidationReport, Violation};
pub use matching::{is_rainbow_matching, Edge, Matching};
pub use switching::Switching;
pub use vertex_set::VertexSet;
