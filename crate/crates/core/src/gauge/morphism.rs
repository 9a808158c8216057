use std::sync::Arc;

use serde::Serialize;

use super::{GaugeError, ObservableModel};
use crate::cech::{pushforward_compact, SpaceMorphism};
use crate::linalg::{kernel_basis, rank};
use crate::presymplectic::{MixedGroup, PAGMorphism, PresymplecticError};
use crate::RatMatrix;

/// Morphism of objects, carried by a map of the underlying regions.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleMorphism {
    name: String,
    source: Arc<ObservableModel>,
    target: Arc<ObservableModel>,
    map: SpaceMorphism,
    a_block: RatMatrix,
    c_block: RatMatrix,
    induced: PAGMorphism,
}

impl BundleMorphism {
    /// Derives the AB and charge blocks from the pullbacks and checks
    /// `P₁ (ρ₂/q₂²) P_{m-2}ᵀ = ρ₁/q₁²`, which is exactly τ-preservation.
    pub fn new(
        name: impl Into<String>,
        source: Arc<ObservableModel>,
        target: Arc<ObservableModel>,
        map: SpaceMorphism,
    ) -> Result<Self, GaugeError> {
        let name = name.into();
        if **map.source() != *source.object().space || **map.target() != *target.object().space {
            return Err(GaugeError::SpaceMismatch { morphism: name });
        }
        if source.dyn_pairs() > 0 || target.dyn_pairs() > 0 {
            return Err(GaugeError::DynamicalSectorInMorphism { morphism: name });
        }
        let m = source.object().space.dim_m();
        let p1 = map.pullback(1)?;
        let pc = map.pullback(m - 2)?;
        let a_block = p1.transpose();
        let c_block = pc.transpose();

        let one = num_rational::BigRational::from_integer(1.into());
        let lhs = &(&p1 * &target.rho().scale(&(&one / &target.object().q_squared))) * &c_block;
        let rhs = source.rho().scale(&(&one / &source.object().q_squared));
        for i in 0..rhs.rows() {
            for j in 0..rhs.cols() {
                if lhs[(i, j)] != rhs[(i, j)] {
                    return Err(GaugeError::Compatibility {
                        morphism: name,
                        ab: i,
                        charge: j,
                    });
                }
            }
        }
        let t = RatMatrix::block_diagonal(&[&a_block, &c_block]);
        let induced = PAGMorphism::new((**source.pag()).clone(), (**target.pag()).clone(), t)
            .map_err(|e| match e {
                PresymplecticError::NotGroupMap { generator } => GaugeError::NotGroupMap {
                    morphism: name.clone(),
                    generator,
                },
                other => other.into(),
            })?;
        Ok(BundleMorphism {
            name,
            source,
            target,
            map,
            a_block,
            c_block,
            induced,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<ObservableModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ObservableModel> {
        &self.target
    }

    pub fn space_map(&self) -> &SpaceMorphism {
        &self.map
    }

    pub fn a_block(&self) -> &RatMatrix {
        &self.a_block
    }

    pub fn c_block(&self) -> &RatMatrix {
        &self.c_block
    }

    pub fn induced(&self) -> &PAGMorphism {
        &self.induced
    }

    /// `next ∘ self`.
    pub fn then(
        &self,
        next: &BundleMorphism,
        name: impl Into<String>,
    ) -> Result<BundleMorphism, GaugeError> {
        let map = self.map.then(&next.map)?;
        BundleMorphism::new(name, self.source.clone(), next.target.clone(), map)
    }
}

pub fn induced_observable_morphism(f: &BundleMorphism) -> &PAGMorphism {
    f.induced()
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub morphism: String,
    /// `(dim H²_c(source), dim H²_c(target))`.
    pub dims: (usize, usize),
    pub pushforward: Vec<Vec<String>>,
    pub pushforward_injective: bool,
    pub pushforward_kernel: Vec<Vec<String>>,
    pub model_injective: bool,
    pub model_kernel: MixedGroup,
    pub kernel_in_radical: bool,
    /// C-block of the induced morphism equals the compact push-forward.
    pub naturality: bool,
    pub criteria_agree: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Injective,
    NotInjective,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Injective => "injective",
            Verdict::NotInjective => "NOT injective",
        })
    }
}

/// Compares injectivity of the model morphism with injectivity of the
/// compact push-forward in degree 2. The verdict is the model's.
pub fn locality_check(f: &BundleMorphism) -> Result<LocalityReport, GaugeError> {
    let push = pushforward_compact(f.space_map(), 2)?;
    let pushforward_injective = rank(&push.matrix) == push.matrix.cols();
    let kernel = f.induced().kernel();
    let model_injective = kernel.is_trivial();
    let kernel_in_radical = f.source().pag().radical().contains_group(&kernel);
    Ok(LocalityReport {
        morphism: f.name().to_string(),
        dims: (push.matrix.cols(), push.matrix.rows()),
        pushforward: push.matrix.to_strings(),
        pushforward_injective,
        pushforward_kernel: kernel_basis(&push.matrix).transpose().to_strings(),
        model_injective,
        model_kernel: kernel,
        kernel_in_radical,
        naturality: &push.matrix == f.c_block(),
        criteria_agree: model_injective == pushforward_injective,
        verdict: if model_injective {
            Verdict::Injective
        } else {
            Verdict::NotInjective
        },
    })
}
