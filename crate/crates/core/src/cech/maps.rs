use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::cohomology::{induced_pullback_matrix, pullback_between, Ring};
use super::complex::SimplicialMap;
use super::space::SpaceModel;
use super::CechError;
use crate::linalg::rank;
use crate::RatMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapDirection {
    Pullback,
    CompactPushforward,
}

/// A linear map between cohomology groups in their stored bases.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyMap {
    pub degree: usize,
    pub ring: Ring,
    pub direction: MapDirection,
    pub matrix: RatMatrix,
}

impl CohomologyMap {
    pub fn is_injective(&self) -> bool {
        rank(&self.matrix) == self.matrix.cols()
    }

    pub fn is_surjective(&self) -> bool {
        rank(&self.matrix) == self.matrix.rows()
    }
}

pub fn induced_pullback(f: &SimplicialMap, degree: usize, ring: Ring) -> CohomologyMap {
    CohomologyMap {
        degree,
        ring,
        direction: MapDirection::Pullback,
        matrix: induced_pullback_matrix(f, degree, ring),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismBody {
    Simplicial(SimplicialMap),
    /// Pullback matrices per degree; degrees where either side has vanishing
    /// cohomology may be omitted.
    Matrices(BTreeMap<usize, RatMatrix>),
}

/// A map of spacetime regions at the level the observable models need.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceMorphism {
    source: Arc<SpaceModel>,
    target: Arc<SpaceModel>,
    body: MorphismBody,
}

impl SpaceMorphism {
    pub fn new(
        source: Arc<SpaceModel>,
        target: Arc<SpaceModel>,
        body: MorphismBody,
    ) -> Result<Self, CechError> {
        if source.dim_m() != target.dim_m() {
            return Err(CechError::DimensionMismatch {
                source_dim: source.dim_m(),
                target_dim: target.dim_m(),
            });
        }
        match &body {
            MorphismBody::Simplicial(f) => {
                let ok =
                    source.complex() == Some(f.source()) && target.complex() == Some(f.target());
                if !ok {
                    return Err(CechError::NotSimplicial(
                        "vertex maps need triangulated source and target".into(),
                    ));
                }
            }
            MorphismBody::Matrices(mats) => {
                for (&k, m) in mats {
                    let expect = (source.betti(k), target.betti(k));
                    if m.shape() != expect {
                        return Err(CechError::PullbackShape {
                            degree: k,
                            expected: expect,
                            found: m.shape(),
                        });
                    }
                }
            }
        }
        Ok(SpaceMorphism {
            source,
            target,
            body,
        })
    }

    pub fn simplicial(
        source: Arc<SpaceModel>,
        target: Arc<SpaceModel>,
        vertex_map: Vec<usize>,
    ) -> Result<Self, CechError> {
        let (Some(s), Some(t)) = (source.complex(), target.complex()) else {
            return Err(CechError::NotSimplicial(
                "vertex maps need triangulated source and target".into(),
            ));
        };
        let f = SimplicialMap::new(s.clone(), t.clone(), vertex_map)?;
        SpaceMorphism::new(source, target, MorphismBody::Simplicial(f))
    }

    pub fn identity(x: Arc<SpaceModel>) -> Self {
        let body = match x.complex() {
            Some(c) => MorphismBody::Simplicial(SimplicialMap::identity(c)),
            None => MorphismBody::Matrices(
                (0..x.dim_m())
                    .map(|k| (k, RatMatrix::identity(x.betti(k))))
                    .collect(),
            ),
        };
        SpaceMorphism {
            source: x.clone(),
            target: x,
            body,
        }
    }

    pub fn source(&self) -> &Arc<SpaceModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SpaceModel> {
        &self.target
    }

    pub fn body(&self) -> &MorphismBody {
        &self.body
    }

    /// Pullback on `H^k` in the integral bases of both sides. Entries are
    /// integral for triangulated maps; matrix-backed maps are taken as given.
    pub fn pullback(&self, k: usize) -> Result<RatMatrix, CechError> {
        let shape = (self.source.betti(k), self.target.betti(k));
        match &self.body {
            MorphismBody::Simplicial(f) => {
                let src = self.source.basis_group(k).expect("triangulated");
                let dst = self.target.basis_group(k).expect("triangulated");
                Ok(pullback_between(f, k, &src, &dst))
            }
            MorphismBody::Matrices(mats) => match mats.get(&k) {
                Some(m) => Ok(m.clone()),
                None if shape.0 == 0 || shape.1 == 0 => Ok(RatMatrix::zeros(shape.0, shape.1)),
                None => Err(CechError::MissingPullback { degree: k }),
            },
        }
    }

    pub fn pullback_map(&self, k: usize) -> Result<CohomologyMap, CechError> {
        Ok(CohomologyMap {
            degree: k,
            ring: Ring::Rational,
            direction: MapDirection::Pullback,
            matrix: self.pullback(k)?,
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpaceMorphism) -> Result<SpaceMorphism, CechError> {
        if self.target != other.source {
            return Err(CechError::NotComposable);
        }
        if let (MorphismBody::Simplicial(f), MorphismBody::Simplicial(g)) =
            (&self.body, &other.body)
        {
            return SpaceMorphism::new(
                self.source.clone(),
                other.target.clone(),
                MorphismBody::Simplicial(f.then(g)?),
            );
        }
        let mut mats = BTreeMap::new();
        for k in 0..self.source.dim_m() {
            mats.insert(k, &self.pullback(k)? * &other.pullback(k)?);
        }
        SpaceMorphism::new(
            self.source.clone(),
            other.target.clone(),
            MorphismBody::Matrices(mats),
        )
    }
}

/// Push-forward on compactly supported cohomology: the transpose of the
/// pullback in the complementary degree.
pub fn pushforward_compact(f: &SpaceMorphism, k: usize) -> Result<CohomologyMap, CechError> {
    let m = f.source().dim_m();
    if f.target().dim_m() != m {
        return Err(CechError::DimensionMismatch {
            source_dim: m,
            target_dim: f.target().dim_m(),
        });
    }
    if !f.source().oriented() || !f.target().oriented() {
        return Err(CechError::NotOriented);
    }
    let dual = m.checked_sub(k).ok_or(CechError::DegreeOutOfRange {
        degree: k,
        dim_m: m,
    })?;
    Ok(CohomologyMap {
        degree: k,
        ring: Ring::Rational,
        direction: MapDirection::CompactPushforward,
        matrix: f.pullback(dual)?.transpose(),
    })
}
