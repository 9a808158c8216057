use std::sync::Arc;

use serde::Serialize;

use super::{BundleMorphism, GaugeError, ObservableModel};
use crate::presymplectic::{section, MixedGroup, PAGMorphism, PresymplecticGroup};
use crate::RatMatrix;

/// Subcategory with a terminal object: `to_terminal[i]` is the unique map
/// from object `i` to the terminal object, `morphisms` lists `(i, j, g)`.
pub struct HKDiagram {
    pub terminal: Arc<ObservableModel>,
    pub to_terminal: Vec<BundleMorphism>,
    pub morphisms: Vec<(usize, usize, BundleMorphism)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HKObject {
    pub name: String,
    pub kernel: MixedGroup,
    pub kernel_in_radical: bool,
    pub quotient: PresymplecticGroup,
    #[serde(skip)]
    pub projection: PAGMorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct HKMorphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub triangle_commutes: bool,
    pub matrix: Vec<Vec<String>>,
    pub injective: bool,
    #[serde(skip)]
    pub induced: PAGMorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct HKReport {
    pub terminal: String,
    pub objects: Vec<HKObject>,
    pub morphisms: Vec<HKMorphism>,
    /// Every induced morphism of the quotient functor is injective.
    pub all_injective: bool,
}

pub fn hk_quotient(d: &HKDiagram) -> Result<HKReport, GaugeError> {
    for h in &d.to_terminal {
        if h.target().pag() != d.terminal.pag() || h.target().name() != d.terminal.name() {
            return Err(GaugeError::MissingTerminalMorphism {
                object: h.source().name().into(),
            });
        }
    }
    let mut objects = Vec::with_capacity(d.to_terminal.len());
    for h in &d.to_terminal {
        let pag = h.source().pag();
        let kernel = h.induced().kernel();
        let radical = pag.radical();
        if let Some(generator) = kernel
            .generators()
            .columns()
            .iter()
            .position(|g| !radical.contains(g))
        {
            return Err(GaugeError::KernelOutsideRadical {
                object: h.source().name().into(),
                generator,
            });
        }
        let (quotient, projection) = pag.quotient(&kernel)?;
        objects.push(HKObject {
            name: h.source().name().into(),
            kernel,
            kernel_in_radical: true,
            quotient,
            projection,
        });
    }

    let mut morphisms = Vec::with_capacity(d.morphisms.len());
    for (i, j, g) in &d.morphisms {
        let (i, j) = (*i, *j);
        let len = d.to_terminal.len();
        let (hi, hj) = match (d.to_terminal.get(i), d.to_terminal.get(j)) {
            (Some(hi), Some(hj)) => (hi, hj),
            _ => {
                return Err(GaugeError::IndexOutOfRange {
                    index: i.max(j),
                    len,
                })
            }
        };
        if g.source().pag() != hi.source().pag() || g.target().pag() != hj.source().pag() {
            return Err(GaugeError::NonCommutingTriangle {
                morphism: g.name().into(),
            });
        }
        let composite = hj.induced().matrix() * g.induced().matrix();
        if &composite != hi.induced().matrix() {
            return Err(GaugeError::NonCommutingTriangle {
                morphism: g.name().into(),
            });
        }
        let (oi, oj) = (&objects[i], &objects[j]);
        let sigma = section(oi.projection.matrix());
        let t: RatMatrix = &(oj.projection.matrix() * g.induced().matrix()) * &sigma;
        let induced = PAGMorphism::new(oi.quotient.clone(), oj.quotient.clone(), t)?;
        morphisms.push(HKMorphism {
            name: g.name().into(),
            source: i,
            target: j,
            triangle_commutes: true,
            matrix: induced.matrix().to_strings(),
            injective: induced.is_injective(),
            induced,
        });
    }
    let all_injective = morphisms.iter().all(|m| m.injective);
    Ok(HKReport {
        terminal: d.terminal.name().into(),
        objects,
        morphisms,
        all_injective,
    })
}
