//! Separating systems made of edges, cycles and subdivisions of K4.
//!
//! [`engine::build_separating_system`] peels a graph level by level with
//! Pósa rotations and emits a family of subgraphs such that for every
//! ordered pair of distinct edges `(e, f)` some member contains `e` but not
//! `f`. [`verifier`] checks such families from first principles.

pub mod builder;
pub mod certificate;
pub mod corpus;
pub mod covers;
pub mod engine;
pub mod error;
pub mod graph;
pub mod matchings;
pub mod rotation;
pub mod structure;
pub mod system;
pub mod verifier;

pub use engine::{build_separating_system, Engine};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, LabeledGraph, VertexId};
pub use system::{ElementKind, Mode, SeparatingSystem, Step, SystemElement};
