use num_rational::BigRational;

use super::{MixedGroup, PresymplecticError, PresymplecticGroup};
use crate::RatMatrix;

/// Linear map `x ↦ T x` restricting to a τ-preserving homomorphism `B₁ → B₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAGMorphism {
    source: PresymplecticGroup,
    target: PresymplecticGroup,
    t: RatMatrix,
}

impl PAGMorphism {
    /// Checks that generators land in the target and that `TᵀS₂T` agrees
    /// with `S₁` on every pair of source generators.
    pub fn new(
        source: PresymplecticGroup,
        target: PresymplecticGroup,
        t: RatMatrix,
    ) -> Result<Self, PresymplecticError> {
        if t.shape() != (target.ambient_dim(), source.ambient_dim()) {
            return Err(PresymplecticError::Shape(format!(
                "map of shape {:?} from Q^{} to Q^{}",
                t.shape(),
                source.ambient_dim(),
                target.ambient_dim()
            )));
        }
        let b1 = source.group();
        let b2 = target.group();
        for (i, g) in b1.free_gens().columns().iter().enumerate() {
            if !b2.contains(&t.mul_vec(g)) {
                return Err(PresymplecticError::NotGroupMap { generator: i });
            }
        }
        for (j, g) in b1.divisible_gens().columns().iter().enumerate() {
            if !b2.contains_line(&t.mul_vec(g)) {
                return Err(PresymplecticError::NotGroupMap {
                    generator: b1.free_rank() + j,
                });
            }
        }
        let g = b1.generators();
        let tg = &t * &g;
        let lhs = &(&tg.transpose() * target.pairing_matrix()) * &tg;
        let rhs = &(&g.transpose() * source.pairing_matrix()) * &g;
        for i in 0..g.cols() {
            for j in 0..g.cols() {
                if lhs[(i, j)] != rhs[(i, j)] {
                    return Err(PresymplecticError::PairingNotPreserved {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(PAGMorphism { source, target, t })
    }

    pub fn identity(b: &PresymplecticGroup) -> Self {
        PAGMorphism {
            source: b.clone(),
            target: b.clone(),
            t: RatMatrix::identity(b.ambient_dim()),
        }
    }

    pub fn source(&self) -> &PresymplecticGroup {
        &self.source
    }

    pub fn target(&self) -> &PresymplecticGroup {
        &self.target
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.t
    }

    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.t.mul_vec(x)
    }

    pub fn kernel(&self) -> MixedGroup {
        self.source.group().kernel(&self.t).expect("shape checked")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PAGMorphism) -> Result<PAGMorphism, PresymplecticError> {
        if self.target != next.source {
            return Err(PresymplecticError::NotComposable);
        }
        PAGMorphism::new(self.source.clone(), next.target.clone(), &next.t * &self.t)
    }
}

pub fn validate_morphism(
    t: RatMatrix,
    source: &PresymplecticGroup,
    target: &PresymplecticGroup,
) -> Result<PAGMorphism, PresymplecticError> {
    PAGMorphism::new(source.clone(), target.clone(), t)
}

pub fn kernel_of_morphism(phi: &PAGMorphism) -> MixedGroup {
    phi.kernel()
}
