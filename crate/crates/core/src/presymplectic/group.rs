use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{MixedGroup, PAGMorphism, PresymplecticError};
use crate::linalg::{inverse, left_annihilator};
use crate::RatMatrix;

/// Group `B ⊆ Q^n` with pairing `τ(x, y) = 2π·xᵀSy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresymplecticGroup {
    group: MixedGroup,
    s: RatMatrix,
}

impl PresymplecticGroup {
    pub fn new(group: MixedGroup, s: RatMatrix) -> Result<Self, PresymplecticError> {
        let n = group.ambient_dim();
        if s.shape() != (n, n) {
            return Err(PresymplecticError::Shape(format!(
                "pairing of shape {:?} on Q^{n}",
                s.shape()
            )));
        }
        if s.transpose() != s.neg() {
            return Err(PresymplecticError::NotAntisymmetric);
        }
        Ok(PresymplecticGroup { group, s })
    }

    pub fn group(&self) -> &MixedGroup {
        &self.group
    }

    pub fn pairing_matrix(&self) -> &RatMatrix {
        &self.s
    }

    pub fn ambient_dim(&self) -> usize {
        self.group.ambient_dim()
    }

    /// `xᵀSy`, so that `τ(x, y) = 2π·pairing(x, y)`.
    pub fn pairing(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let sy = self.s.mul_vec(y);
        x.iter()
            .zip(&sy)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.group.contains(x)
    }

    /// `{ψ : τ(B, ψ) = 0}`.
    pub fn radical(&self) -> MixedGroup {
        let g = self.group.generators();
        let m = &g.transpose() * &self.s;
        self.group.kernel(&m).expect("shape")
    }

    /// `{ψ : τ(B, ψ) ⊆ 2πZ}`: divisible generators pair to zero, lattice
    /// generators to integers.
    pub fn center(&self) -> MixedGroup {
        let md = &self.group.divisible_gens().transpose() * &self.s;
        let mf = &self.group.free_gens().transpose() * &self.s;
        let b0 = self.group.kernel(&md).expect("shape");
        b0.integral_level_set(&mf).expect("shape")
    }

    pub fn is_central(&self, x: &[BigRational]) -> bool {
        self.center().contains(x)
    }

    /// `B/Q` presented in `Q^{n - dim span Q}`, with the projection.
    ///
    /// Fails when `Q` is not inside the radical, and when `B ∩ span(Q) ≠ Q`
    /// since the quotient would then carry torsion, which the model does not
    /// represent.
    pub fn quotient(
        &self,
        q: &MixedGroup,
    ) -> Result<(PresymplecticGroup, PAGMorphism), PresymplecticError> {
        if q.ambient_dim() != self.ambient_dim() {
            return Err(PresymplecticError::GroupMismatch);
        }
        let radical = self.radical();
        let gens = q.generators();
        for (i, g) in gens.columns().iter().enumerate() {
            if !self.group.contains(g) {
                return Err(PresymplecticError::NotASubgroup { generator: i });
            }
            if !radical.contains(g) {
                return Err(PresymplecticError::NotQuotientable { generator: i });
            }
        }
        let p = left_annihilator(&gens);
        let saturated = self.group.kernel(&p)?;
        if &saturated != q {
            return Err(PresymplecticError::TorsionQuotient);
        }
        let section = section(&p);
        let s = &(&section.transpose() * &self.s) * &section;
        let image = self.group.image(&p)?;
        let target = PresymplecticGroup::new(image, s)?;
        let proj = PAGMorphism::new(self.clone(), target.clone(), p)?;
        Ok((target, proj))
    }
}

/// Right inverse `pᵀ(ppᵀ)⁻¹` of a full-row-rank matrix.
pub(crate) fn section(p: &RatMatrix) -> RatMatrix {
    let pt = p.transpose();
    let gram = p * &pt;
    let inv = inverse(&gram).expect("full row rank");
    &pt * &inv
}

impl Serialize for PresymplecticGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PresymplecticGroup", 4)?;
        st.serialize_field("ambient_dim", &self.ambient_dim())?;
        st.serialize_field(
            "free_gens",
            &self.group.free_gens().transpose().to_strings(),
        )?;
        st.serialize_field(
            "divisible_gens",
            &self.group.divisible_gens().transpose().to_strings(),
        )?;
        st.serialize_field("S", &self.s.to_strings())?;
        st.end()
    }
}
