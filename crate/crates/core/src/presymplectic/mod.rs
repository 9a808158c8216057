//! Presymplectic Abelian groups inside `Q^n`: mixed lattice and divisible
//! subgroups with a rational antisymmetric pairing.

mod group;
mod mixed;
mod morphism;

pub(crate) use group::section;
pub use group::PresymplecticGroup;
pub use mixed::MixedGroup;
pub use morphism::{kernel_of_morphism, validate_morphism, PAGMorphism};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresymplecticError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("pairing matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("groups live in different ambient spaces")]
    GroupMismatch,
    #[error("generator {generator} of the subgroup is not a member of the group")]
    NotASubgroup { generator: usize },
    #[error("not quotientable: generator {generator} is outside the radical")]
    NotQuotientable { generator: usize },
    #[error("quotient would have torsion")]
    TorsionQuotient,
    #[error("not a group map into target: generator {generator} leaves the target group")]
    NotGroupMap { generator: usize },
    #[error("does not preserve τ on generator pair ({first}, {second})")]
    PairingNotPreserved { first: usize, second: usize },
    #[error("morphisms are not composable")]
    NotComposable,
}
