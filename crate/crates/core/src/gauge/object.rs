use std::ops::Range;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::GaugeError;
use crate::cech::SpaceModel;
use crate::presymplectic::{MixedGroup, PresymplecticGroup};
use crate::weyl::{WeylElement, WeylError};
use crate::RatMatrix;

/// How the holonomy map `ρ: H²_c → H¹` of an object is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum RhoPolicy {
    /// Identity in the stored bases; needs a compact Cauchy surface and `b₁ = dim H²_c`.
    PdDefault,
    Zero,
    Matrix(RatMatrix),
}

impl RhoPolicy {
    pub fn label(&self) -> &'static str {
        match self {
            RhoPolicy::PdDefault => "pd_default",
            RhoPolicy::Zero => "zero",
            RhoPolicy::Matrix(_) => "matrix",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleObject {
    pub name: String,
    pub space: Arc<SpaceModel>,
    pub rho: RhoPolicy,
    pub q_squared: BigRational,
    pub dyn_pairs: usize,
    /// ρ was filled in by policy because the input gave none.
    pub rho_defaulted: bool,
}

impl BundleObject {
    pub fn new(name: impl Into<String>, space: Arc<SpaceModel>, rho: RhoPolicy) -> Self {
        BundleObject {
            name: name.into(),
            space,
            rho,
            q_squared: BigRational::one(),
            dyn_pairs: 0,
            rho_defaulted: false,
        }
    }

    pub fn with_q_squared(mut self, q: BigRational) -> Self {
        self.q_squared = q;
        self
    }

    pub fn with_dyn_pairs(mut self, s: usize) -> Self {
        self.dyn_pairs = s;
        self
    }

    pub fn with_rho_defaulted(mut self, defaulted: bool) -> Self {
        self.rho_defaulted = defaulted;
        self
    }

    /// `b₁`, the rank of the Aharonov–Bohm lattice.
    pub fn ab_rank(&self) -> usize {
        self.space.betti(1)
    }

    /// `dim H²_c = b_{m-2}`.
    pub fn charge_rank(&self) -> usize {
        self.space.betti(self.space.dim_m() - 2)
    }

    pub fn resolve_rho(&self) -> Result<RatMatrix, GaugeError> {
        let (b1, c) = (self.ab_rank(), self.charge_rank());
        match &self.rho {
            RhoPolicy::Zero => Ok(RatMatrix::zeros(b1, c)),
            RhoPolicy::PdDefault => {
                if !self.space.compact_cauchy() {
                    return Err(GaugeError::UnresolvablePolicy {
                        object: self.name.clone(),
                        reason: "pd_default needs a compact Cauchy surface".into(),
                    });
                }
                if b1 != c {
                    return Err(GaugeError::UnresolvablePolicy {
                        object: self.name.clone(),
                        reason: format!("pd_default needs b1 = dim H2_c, found {b1} and {c}"),
                    });
                }
                Ok(RatMatrix::identity(b1))
            }
            RhoPolicy::Matrix(m) => {
                if m.shape() != (b1, c) {
                    return Err(GaugeError::RhoShape {
                        object: self.name.clone(),
                        expected: (b1, c),
                        found: m.shape(),
                    });
                }
                Ok(m.clone())
            }
        }
    }
}

/// Finite model of the observable group of one object: ambient
/// `Q^{b₁} ⊕ Q^c ⊕ Q^{2s}` holding the AB lattice `Z^{b₁}`, the charge space
/// `Q^c` and the dynamical stand-in `Q^{2s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableModel {
    object: Arc<BundleObject>,
    rho: RatMatrix,
    pag: Arc<PresymplecticGroup>,
}

pub fn build_observable_model(obj: &Arc<BundleObject>) -> Result<ObservableModel, GaugeError> {
    if !obj.q_squared.is_positive() {
        return Err(GaugeError::NonPositiveCharge {
            object: obj.name.clone(),
        });
    }
    let rho = obj.resolve_rho()?;
    let (b1, c, s) = (obj.ab_rank(), obj.charge_rank(), obj.dyn_pairs);
    let n = b1 + c + 2 * s;
    let block = rho.scale(&(BigRational::one() / &obj.q_squared));
    let mut pairing = RatMatrix::zeros(n, n);
    pairing.set_block(0, b1, &block);
    pairing.set_block(b1, 0, &block.transpose().neg());
    for k in 0..s {
        let i = b1 + c + 2 * k;
        pairing[(i, i + 1)] = BigRational::one();
        pairing[(i + 1, i)] = -BigRational::one();
    }
    let mut free = RatMatrix::zeros(n, b1);
    free.set_block(0, 0, &RatMatrix::identity(b1));
    let mut divisible = RatMatrix::zeros(n, c + 2 * s);
    divisible.set_block(b1, 0, &RatMatrix::identity(c + 2 * s));
    let group = MixedGroup::new(n, &free, &divisible)?;
    let pag = PresymplecticGroup::new(group, pairing)?;
    Ok(ObservableModel {
        object: obj.clone(),
        rho,
        pag: Arc::new(pag),
    })
}

impl ObservableModel {
    pub fn object(&self) -> &Arc<BundleObject> {
        &self.object
    }

    pub fn name(&self) -> &str {
        &self.object.name
    }

    pub fn pag(&self) -> &Arc<PresymplecticGroup> {
        &self.pag
    }

    pub fn rho(&self) -> &RatMatrix {
        &self.rho
    }

    pub fn ab_rank(&self) -> usize {
        self.object.ab_rank()
    }

    pub fn charge_rank(&self) -> usize {
        self.object.charge_rank()
    }

    pub fn dyn_pairs(&self) -> usize {
        self.object.dyn_pairs
    }

    pub fn ambient_dim(&self) -> usize {
        self.pag.ambient_dim()
    }

    pub fn ab_range(&self) -> Range<usize> {
        0..self.ab_rank()
    }

    pub fn charge_range(&self) -> Range<usize> {
        let b1 = self.ab_rank();
        b1..b1 + self.charge_rank()
    }

    pub fn dyn_range(&self) -> Range<usize> {
        self.charge_range().end..self.ambient_dim()
    }

    /// Charge sector embedding `Q^c → ambient`.
    pub fn charge_embedding(&self) -> RatMatrix {
        let mut e = RatMatrix::zeros(self.ambient_dim(), self.charge_rank());
        e.set_block(self.ab_rank(), 0, &RatMatrix::identity(self.charge_rank()));
        e
    }

    /// Element with the given sector coordinates.
    pub fn element(
        &self,
        ab: &[BigRational],
        charge: &[BigRational],
        dynamical: &[BigRational],
    ) -> Vec<BigRational> {
        let mut x = Vec::with_capacity(self.ambient_dim());
        x.extend_from_slice(ab);
        x.extend_from_slice(charge);
        x.extend_from_slice(dynamical);
        assert_eq!(x.len(), self.ambient_dim(), "sector lengths");
        x
    }

    /// Center membership read off the block structure: `d = 0`,
    /// `ρ(c)/q² ∈ Z^{b₁}` and `ρᵀ a = 0`. Independent of the generic center
    /// computation and used to cross-check it.
    pub fn center_by_blocks(&self, x: &[BigRational]) -> bool {
        self.sector_conditions(x, false)
    }

    /// Radical membership from the block structure: as the center with `ρ(c) = 0`.
    pub fn radical_by_blocks(&self, x: &[BigRational]) -> bool {
        self.sector_conditions(x, true)
    }

    fn sector_conditions(&self, x: &[BigRational], radical: bool) -> bool {
        if !self.pag.contains(x) {
            return false;
        }
        let a = &x[self.ab_range()];
        let c = &x[self.charge_range()];
        let d = &x[self.dyn_range()];
        if d.iter().any(|v| !v.is_zero()) {
            return false;
        }
        let rc = self.rho.mul_vec(c);
        let q = &self.object.q_squared;
        let rc_ok = rc.iter().all(|v| {
            let v = v / q;
            if radical {
                v.is_zero()
            } else {
                v.is_integer()
            }
        });
        let rta = self.rho.transpose().mul_vec(a);
        rc_ok && rta.iter().all(Zero::is_zero)
    }

    /// `W(ι(e_k))`, the topological charge symbol of the `k`-th charge class.
    pub fn topological_charge(&self, k: usize) -> Result<WeylElement, GaugeError> {
        self.charge_symbol(&unit_vector(self.charge_rank(), k).ok_or(
            GaugeError::IndexOutOfRange {
                index: k,
                len: self.charge_rank(),
            },
        )?)
    }

    /// `W(ι(x))` for a charge vector `x`.
    pub fn charge_symbol(&self, x: &[BigRational]) -> Result<WeylElement, GaugeError> {
        if x.len() != self.charge_rank() {
            return Err(GaugeError::IndexOutOfRange {
                index: x.len(),
                len: self.charge_rank(),
            });
        }
        let v = self.charge_embedding().mul_vec(x);
        WeylElement::weyl(&self.pag, &v).map_err(|e: WeylError| e.into())
    }
}

fn unit_vector(n: usize, k: usize) -> Option<Vec<BigRational>> {
    (k < n).then(|| {
        let mut v = vec![BigRational::zero(); n];
        v[k] = BigRational::one();
        v
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub object: String,
    pub ab_rank: usize,
    pub charge_rank: usize,
    pub dyn_pairs: usize,
    pub rho_policy: &'static str,
    pub rho: Vec<Vec<String>>,
    #[serde(serialize_with = "crate::scalar::serde_rational::serialize")]
    pub q_squared: BigRational,
    pub group: PresymplecticGroup,
    pub center: MixedGroup,
    pub radical: MixedGroup,
    /// Set when ρ was not given and the zero policy filled it in.
    pub relies_on_zero_default: bool,
}

impl ObservableModel {
    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            object: self.name().to_string(),
            ab_rank: self.ab_rank(),
            charge_rank: self.charge_rank(),
            dyn_pairs: self.dyn_pairs(),
            rho_policy: self.object.rho.label(),
            rho: self.rho.to_strings(),
            q_squared: self.object.q_squared.clone(),
            group: (*self.pag).clone(),
            center: self.pag.center(),
            radical: self.pag.radical(),
            relies_on_zero_default: self.object.rho_defaulted
                && matches!(self.object.rho, RhoPolicy::Zero),
        }
    }
}
