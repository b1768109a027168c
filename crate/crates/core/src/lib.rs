//! Packings of arborescences in mixed hypergraphs: condition evaluators,
//! constructive orientation and packing engines, generalized polymatroid
//! calculus, and exhaustive oracles certifying every verdict on small inputs.

pub mod conditions;
pub mod error;
pub mod gen;
pub mod gpoly;
pub mod graph;
pub mod instance;
pub mod matroid;
pub mod orientation;
pub mod packing;
pub mod sets;

pub use error::{Error, Result};
pub use graph::{Arc, Bounds, Dyperedge, Element, MixedHypergraph, RootMultiset};
pub use instance::{Instance, MatroidDoc};
pub use matroid::Matroid;
pub use sets::{Budget, ElementSet, VertexSet, DEFAULT_CAP};
