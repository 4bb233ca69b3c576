pub(crate) mod canon;
pub mod configuration;
pub mod enumeration;
pub mod error;
pub mod genus;
pub mod graph;
pub mod halfedge;
pub mod modular;
pub mod moves;
pub mod ribbon;

pub use error::{Error, Result};
pub use graph::Multigraph;
pub use halfedge::{CubicMultigraph, Pairing, VertexPermutation};
