//! Cubic multigraphs built from half-edge pairings: construction, canonical
//! codes, automorphisms, circuits and edge defect.

mod multigraph;
mod pairing;
mod structure;

pub use multigraph::CubicMultigraph;
pub use pairing::Pairing;
pub(crate) use pairing::for_each_matching;
pub(crate) use structure::next_permutation;
pub use structure::{
    count_subgraph_copies, edge_defect, find_small_defect_maps, Pattern, VertexPermutation, MAX_DEFECT_SUPPORT,
    MAX_PATTERN_VERTICES,
};
