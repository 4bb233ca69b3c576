//! Triangulated surfaces glued over cubic multigraphs, punctures and genus,
//! one-puncture sampling, and exact graph genus.

mod embedding;
mod map;
mod sampling;

pub use embedding::{exact_graph_genus, rotation_system_count, DEFAULT_MAX_DARTS};
pub use map::{CombinatorialMap, SurfaceInvariants};
pub(crate) use sampling::check_one_puncture_size;
pub use sampling::{one_puncture_stats, sample_one_puncture, sample_one_puncture_pairing, DEFAULT_MAX_ATTEMPTS};

pub fn map_from_pairing(p: &crate::Pairing) -> CombinatorialMap {
    CombinatorialMap::from_pairing(p)
}

pub fn surface_invariants(m: &CombinatorialMap) -> crate::Result<SurfaceInvariants> {
    m.surface_invariants()
}
