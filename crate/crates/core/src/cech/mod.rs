//! Simplicial models of Čech cohomology for spacetime regions, pullbacks,
//! and compactly supported cohomology through Poincaré duality.

mod cohomology;
mod complex;
mod maps;
mod space;

pub use cohomology::{
    cohomology, induced_pullback_matrix, lattice_in_real, CohomologyGroup, LatticeInReal, Ring,
};
pub use complex::{SimplicialComplex, SimplicialMap};
pub use maps::{
    induced_pullback, pushforward_compact, CohomologyMap, MapDirection, MorphismBody, SpaceMorphism,
};
pub use space::{
    compact_support_group, CompactSupportGroup, ComplexSpec, FormalCohomology, FormalSpec,
    SpaceBody, SpaceDescriptor, SpaceModel,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CechError {
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("not a simplicial map: {0}")]
    NotSimplicial(String),
    #[error("unknown space constructor {0:?}")]
    UnknownConstructor(String),
    #[error("non-orientable spaces are not supported")]
    NotOriented,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("spacetime dimensions differ: {source_dim} vs {target_dim}")]
    DimensionMismatch {
        source_dim: usize,
        target_dim: usize,
    },
    #[error("degree {degree} exceeds spacetime dimension {dim_m}")]
    DegreeOutOfRange { degree: usize, dim_m: usize },
    #[error("no pullback matrix supplied in degree {degree}")]
    MissingPullback { degree: usize },
    #[error("pullback in degree {degree} has shape {found:?}, expected {expected:?}")]
    PullbackShape {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("morphisms are not composable")]
    NotComposable,
}
