use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{CyclotomicScalar, WeylError};
use crate::presymplectic::{PAGMorphism, PresymplecticGroup};

/// Coefficient field of a Weyl algebra.
pub trait WeylCoefficient:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `e^{-iπr}`.
    fn phase(r: &BigRational) -> Self;

    fn conj(&self) -> Self;

    /// Terms with negligible coefficients are dropped.
    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

impl WeylCoefficient for CyclotomicScalar {
    fn phase(r: &BigRational) -> Self {
        CyclotomicScalar::phase(r)
    }

    fn conj(&self) -> Self {
        CyclotomicScalar::conj(self)
    }
}

/// Tolerance of the floating-point backend.
pub const APPROX_TOLERANCE: f64 = 1e-9;

impl WeylCoefficient for Complex64 {
    fn phase(r: &BigRational) -> Self {
        let x = r.to_f64().unwrap_or(f64::NAN);
        Complex64::from_polar(1.0, -std::f64::consts::PI * x)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn negligible(&self) -> bool {
        self.norm() < APPROX_TOLERANCE
    }
}

type Key = Vec<BigRational>;

/// Finite sum `Σ α_i W(b_i)` in `Δ(B, τ)`.
#[derive(Clone, Debug)]
pub struct WeylSum<C> {
    group: Arc<PresymplecticGroup>,
    terms: BTreeMap<Key, C>,
}

pub type WeylElement = WeylSum<CyclotomicScalar>;
pub type ApproxWeylElement = WeylSum<Complex64>;

impl<C: PartialEq> PartialEq for WeylSum<C> {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.terms == other.terms
    }
}

fn same_group(a: &Arc<PresymplecticGroup>, b: &Arc<PresymplecticGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<C: WeylCoefficient> WeylSum<C> {
    pub fn zero(group: &Arc<PresymplecticGroup>) -> Self {
        WeylSum {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(group: &Arc<PresymplecticGroup>) -> Self {
        let zero = vec![BigRational::zero(); group.ambient_dim()];
        Self::zero(group).with_term(zero, C::one())
    }

    /// `W(b)`.
    pub fn weyl(group: &Arc<PresymplecticGroup>, b: &[BigRational]) -> Result<Self, WeylError> {
        Self::term(group, b, C::one())
    }

    /// `α W(b)`.
    pub fn term(
        group: &Arc<PresymplecticGroup>,
        b: &[BigRational],
        alpha: C,
    ) -> Result<Self, WeylError> {
        if !group.contains(b) {
            return Err(WeylError::NotAMember);
        }
        Ok(Self::zero(group).with_term(b.to_vec(), alpha))
    }

    /// Adds `α W(b)` without a membership check; callers guarantee `b ∈ B`.
    fn with_term(mut self, b: Key, alpha: C) -> Self {
        self.accumulate(b, alpha);
        self
    }

    fn accumulate(&mut self, b: Key, alpha: C) {
        match self.terms.remove(&b) {
            Some(prev) => {
                let sum = prev + alpha;
                if !sum.negligible() {
                    self.terms.insert(b, sum);
                }
            }
            None => {
                if !alpha.negligible() {
                    self.terms.insert(b, alpha);
                }
            }
        }
    }

    pub fn group(&self) -> &Arc<PresymplecticGroup> {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: &[BigRational]) -> C {
        self.terms.get(b).cloned().unwrap_or_else(C::zero)
    }

    fn check_group(&self, other: &Self) -> Result<(), WeylError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(WeylError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_group(other)?;
        let mut out = self.clone();
        for (b, a) in &other.terms {
            out.accumulate(b.clone(), a.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(&self.group);
        for (b, a) in &self.terms {
            out.accumulate(b.clone(), s.clone() * a.clone());
        }
        out
    }

    /// Bilinear extension of `W(b)W(c) = e^{-iτ(b,c)/2} W(b+c)`.
    pub fn product(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_group(other)?;
        let mut out = Self::zero(&self.group);
        for (b, x) in &self.terms {
            for (c, y) in &other.terms {
                let phase = C::phase(&self.group.pairing(b, c));
                let key: Key = b.iter().zip(c).map(|(u, v)| u + v).collect();
                out.accumulate(key, phase * x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// `(Σ α W(b))* = Σ conj(α) W(-b)`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.group);
        for (b, a) in &self.terms {
            out.accumulate(b.iter().map(|x| -x).collect(), a.conj());
        }
        out
    }

    /// The state `ω(W(b)) = δ_{b,0}`.
    pub fn trivial_state(&self) -> C {
        self.coefficient(&vec![BigRational::zero(); self.group.ambient_dim()])
    }

    /// `Δ(φ)(Σ α W(b)) = Σ α W(φ b)`.
    pub fn push(&self, phi: &PAGMorphism) -> Result<Self, WeylError> {
        if !same_group(&self.group, &Arc::new(phi.source().clone())) {
            return Err(WeylError::GroupMismatch);
        }
        let target = Arc::new(phi.target().clone());
        let mut out = Self::zero(&target);
        for (b, a) in &self.terms {
            out.accumulate(phi.apply(b), a.clone());
        }
        Ok(out)
    }
}

impl WeylElement {
    /// `Σ|α_i|`, exact when every modulus is rational; the flag is false
    /// when some coefficient only admits the triangle-inequality bound.
    pub fn banach_norm(&self) -> (BigRational, bool) {
        let mut total = BigRational::zero();
        let mut exact = true;
        for a in self.terms.values() {
            let (m, e) = a.modulus_bound();
            total += m;
            exact &= e;
        }
        (total, exact)
    }

    /// Floating-point image of the element.
    pub fn to_approx(&self) -> ApproxWeylElement {
        WeylSum {
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(b, a)| (b.clone(), a.to_complex()))
                .collect(),
        }
    }
}

impl ApproxWeylElement {
    pub fn banach_norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm()).sum()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        if !same_group(&self.group, &other.group) {
            return false;
        }
        let keys: std::collections::BTreeSet<&Key> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| (self.coefficient(k) - other.coefficient(k)).norm() < APPROX_TOLERANCE)
    }
}

/// `W(b)` is central iff `b` lies in the center of `(B, τ)`. Also checks
/// this against commutators `W(g)W(b)W(g)*W(b)*` for every generator `g`;
/// a mismatch between the two computations is reported as an error.
pub fn is_central_symbol(
    group: &Arc<PresymplecticGroup>,
    b: &[BigRational],
) -> Result<bool, WeylError> {
    let w = WeylElement::weyl(group, b)?;
    let by_center = group.is_central(b);
    let unit = WeylElement::unit(group);
    let commutes = |g: &[BigRational]| -> Result<bool, WeylError> {
        let wg = WeylElement::weyl(group, g)?;
        let c = wg.product(&w)?.product(&wg.star())?.product(&w.star())?;
        Ok(c == unit)
    };
    let mut by_commutators = true;
    for g in group.group().free_gens().columns() {
        by_commutators &= commutes(&g)?;
    }
    for g in group.group().divisible_gens().columns() {
        // the whole line Q·g must commute; if gᵀSb = p/q ≠ 0 then
        // W(g/2p) fails to commute, and W(g) covers p = 0
        let p = group.pairing(&g, b).numer().clone();
        let t = if p.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(1.into(), p * 2)
        };
        let tg: Vec<BigRational> = g.iter().map(|x| x * &t).collect();
        by_commutators &= commutes(&tg)?;
    }
    if by_center != by_commutators {
        return Err(WeylError::CenterDisagreement);
    }
    Ok(by_center)
}

/// Functorial push-forward along a morphism of presymplectic groups.
pub fn ccr_push<C: WeylCoefficient>(
    phi: &PAGMorphism,
    a: &WeylSum<C>,
) -> Result<WeylSum<C>, WeylError> {
    a.push(phi)
}

impl<C: WeylCoefficient + Serialize> Serialize for WeylSum<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a, C> {
            group_element: Vec<String>,
            coeff: &'a C,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (b, a) in &self.terms {
            seq.serialize_element(&Term {
                group_element: b.iter().map(crate::scalar::format_rational).collect(),
                coeff: a,
            })?;
        }
        seq.end()
    }
}
