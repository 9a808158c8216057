use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GaugeError;

/// Connection up to gauge, in coordinates: curvature relative to a fixed
/// reference and holonomies in `Q^{b₁}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub curvature_coords: Vec<BigRational>,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub holonomy_coords: Vec<BigRational>,
}

/// Observable telling two configurations apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    /// Exponential of `r` times the curvature coordinate `index`.
    Charge {
        index: usize,
        #[serde(with = "crate::scalar::serde_rational")]
        r: BigRational,
    },
    /// Aharonov-Bohm observable with dual lattice vector `e_index`.
    Holonomy { index: usize },
}

impl Descriptor {
    pub fn pairing(&self, c: &Configuration) -> BigRational {
        match self {
            Descriptor::Charge { index, r } => r * &c.curvature_coords[*index],
            Descriptor::Holonomy { index } => c.holonomy_coords[*index].clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Separation {
    GaugeEquivalent,
    Separated {
        descriptor: Descriptor,
        #[serde(with = "crate::scalar::serde_rational")]
        gap: BigRational,
    },
}

/// Integrality of coordinates with respect to the dual lattice basis.
pub fn is_gauge_invariant(coords: &[BigRational]) -> bool {
    coords.iter().all(|c| c.is_integer())
}

pub fn gauge_equivalent(a: &Configuration, b: &Configuration) -> bool {
    a.curvature_coords == b.curvature_coords
        && a.holonomy_coords
            .iter()
            .zip(&b.holonomy_coords)
            .all(|(x, y)| (x - y).is_integer())
}

pub fn separate_configurations(
    a: &Configuration,
    b: &Configuration,
) -> Result<Separation, GaugeError> {
    if a.curvature_coords.len() != b.curvature_coords.len()
        || a.holonomy_coords.len() != b.holonomy_coords.len()
    {
        return Err(GaugeError::LengthMismatch);
    }
    let curvature = a
        .curvature_coords
        .iter()
        .zip(&b.curvature_coords)
        .map(|(x, y)| x - y);
    let descriptor = if let Some((index, delta)) = curvature.enumerate().find(|(_, d)| !d.is_zero())
    {
        let r = BigRational::one() / (delta * BigRational::from_integer(2.into()));
        Descriptor::Charge { index, r }
    } else {
        let frac = a
            .holonomy_coords
            .iter()
            .zip(&b.holonomy_coords)
            .position(|(x, y)| !(x - y).is_integer());
        match frac {
            Some(index) => Descriptor::Holonomy { index },
            None => return Ok(Separation::GaugeEquivalent),
        }
    };
    let gap = descriptor.pairing(a) - descriptor.pairing(b);
    debug_assert!(!gap.is_integer());
    Ok(Separation::Separated { descriptor, gap })
}
