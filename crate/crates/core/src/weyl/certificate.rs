use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{CyclotomicScalar, WeylElement, WeylError};
use crate::presymplectic::PresymplecticGroup;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealStep {
    pub claim: String,
    /// Value obtained by evaluating the left-hand side in the algebra.
    pub computed: WeylElement,
    /// Value predicted by the Weyl relations.
    pub expected: WeylElement,
}

/// Derivation of a multiple of the unit from `W(φ) - 1` inside any
/// two-sided ideal containing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealCertificate {
    #[serde(serialize_with = "crate::scalar::serde_rational::vec::serialize")]
    pub phi: Vec<BigRational>,
    #[serde(serialize_with = "crate::scalar::serde_rational::vec::serialize")]
    pub psi: Vec<BigRational>,
    /// `τ(φ, ψ) / 2π`.
    #[serde(serialize_with = "crate::scalar::serde_rational::serialize")]
    pub pairing: BigRational,
    pub generator: WeylElement,
    pub steps: Vec<IdealStep>,
    pub scalar: CyclotomicScalar,
    pub final_element: WeylElement,
}

fn elements(
    group: &Arc<PresymplecticGroup>,
    phi: &[BigRational],
    psi: &[BigRational],
) -> Result<(WeylElement, WeylElement, WeylElement, CyclotomicScalar), WeylError> {
    let one = WeylElement::unit(group);
    let gen = WeylElement::weyl(group, phi)?.sub(&one)?;
    let wpsi = WeylElement::weyl(group, psi)?;
    // e^{-iτ(φ,ψ)} = e^{-iπ·2r}
    let r = group.pairing(phi, psi);
    let e = CyclotomicScalar::phase(&(r * BigRational::from_integer(2.into())));
    Ok((one, gen, wpsi, e))
}

pub fn ideal_unit_certificate(
    group: &Arc<PresymplecticGroup>,
    phi: &[BigRational],
    psi: &[BigRational],
) -> Result<IdealCertificate, WeylError> {
    let r = group.pairing(phi, psi);
    if r.is_integer() {
        return Err(WeylError::Commuting);
    }
    let (one, gen, wpsi, e) = elements(group, phi, psi)?;
    let wphi = WeylElement::weyl(group, phi)?;

    let conjugated = wpsi.star().product(&gen)?.product(&wpsi)?;
    let expected1 = wphi.scale(&e).sub(&one)?;
    let step1 = IdealStep {
        claim: "W(-ψ)(W(φ)-1)W(ψ) = e^{-iτ(φ,ψ)}W(φ) - 1".into(),
        computed: conjugated.clone(),
        expected: expected1,
    };

    let reduced = conjugated.sub(&gen.scale(&e))?;
    let scalar = e - CyclotomicScalar::one();
    let expected2 = one.scale(&scalar);
    let step2 = IdealStep {
        claim: "e^{-iτ(φ,ψ)}W(φ) - 1 - e^{-iτ(φ,ψ)}(W(φ)-1) = (e^{-iτ(φ,ψ)} - 1)·1".into(),
        computed: reduced.clone(),
        expected: expected2,
    };

    let cert = IdealCertificate {
        phi: phi.to_vec(),
        psi: psi.to_vec(),
        pairing: r,
        generator: gen,
        steps: vec![step1, step2],
        scalar,
        final_element: reduced,
    };
    cert.verify(group)?;
    Ok(cert)
}

impl IdealCertificate {
    /// Re-evaluates every step in the algebra of `group`.
    pub fn verify(&self, group: &Arc<PresymplecticGroup>) -> Result<(), WeylError> {
        let fail = |i: usize| Err(WeylError::CertificateStep { step: i });
        let (one, gen, wpsi, e) = elements(group, &self.phi, &self.psi)?;
        if group.pairing(&self.phi, &self.psi) != self.pairing || gen != self.generator {
            return fail(0);
        }
        let [s1, s2] = self.steps.as_slice() else {
            return fail(0);
        };
        let lhs = wpsi.star().product(&gen)?.product(&wpsi)?;
        let rhs = WeylElement::weyl(group, &self.phi)?.scale(&e).sub(&one)?;
        if lhs != s1.computed || rhs != s1.expected || lhs != rhs {
            return fail(1);
        }
        let lhs2 = lhs.sub(&gen.scale(&e))?;
        if lhs2 != s2.computed || lhs2 != s2.expected {
            return fail(2);
        }
        let scalar = e - CyclotomicScalar::one();
        let zero = vec![BigRational::zero(); group.ambient_dim()];
        let is_unit_multiple = lhs2.len() == 1 && lhs2.coefficient(&zero) == scalar;
        if !is_unit_multiple
            || scalar.is_zero()
            || scalar != self.scalar
            || lhs2 != self.final_element
        {
            return fail(3);
        }
        Ok(())
    }

    /// The scalar as a rational, when it is one.
    pub fn rational_scalar(&self) -> Option<BigRational> {
        self.scalar.to_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presymplectic::MixedGroup;
    use crate::scalar::rat;
    use crate::RatMatrix;

    fn group(entry: BigRational) -> Arc<PresymplecticGroup> {
        let s = RatMatrix::from_rows(
            &[vec![rat(0, 1), entry.clone()], vec![-entry, rat(0, 1)]],
            2,
        )
        .unwrap();
        Arc::new(PresymplecticGroup::new(MixedGroup::integer_lattice(2), s).unwrap())
    }

    fn v(a: i64, b: i64) -> Vec<BigRational> {
        vec![rat(a, 1), rat(b, 1)]
    }

    #[test]
    fn tau_pi_gives_minus_two() {
        let g = group(rat(1, 2));
        let c = ideal_unit_certificate(&g, &v(1, 0), &v(0, 1)).unwrap();
        assert_eq!(c.rational_scalar(), Some(rat(-2, 1)));
        assert!(c.verify(&g).is_ok());
    }

    #[test]
    fn tau_half_pi_gives_minus_i_minus_one() {
        let g = group(rat(1, 4));
        let c = ideal_unit_certificate(&g, &v(1, 0), &v(0, 1)).unwrap();
        assert_eq!(c.scalar, -CyclotomicScalar::i() - CyclotomicScalar::one());
    }

    #[test]
    fn central_pairs_have_no_certificate() {
        let g = group(rat(1, 1));
        assert_eq!(
            ideal_unit_certificate(&g, &v(1, 0), &v(0, 1)).unwrap_err(),
            WeylError::Commuting
        );
    }

    #[test]
    fn tampering_is_detected() {
        let g = group(rat(1, 2));
        let mut c = ideal_unit_certificate(&g, &v(1, 0), &v(0, 1)).unwrap();
        c.scalar = CyclotomicScalar::from_integer(-1);
        assert!(c.verify(&g).is_err());
    }
}
