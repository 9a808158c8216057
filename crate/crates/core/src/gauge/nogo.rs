use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{BundleMorphism, GaugeError};
use crate::presymplectic::MixedGroup;
use crate::scalar::format_rational;
use crate::weyl::{ideal_unit_certificate, IdealCertificate, WeylElement};

/// Wedge `Ξ₁ ← Ξ₃ → Ξ₂` used by the no-go argument.
pub struct NoGoDiagram<'a> {
    pub f1: &'a BundleMorphism,
    pub f2: &'a BundleMorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    /// Generator `k` of the forced kernel on `Ξ₃`.
    pub k: Vec<String>,
    /// `PS(f₁)(k)`.
    pub image: Vec<String>,
    pub image_in_radical: bool,
    pub lambda: String,
    /// `PS(f₁)(λk)`.
    pub scaled_image: Vec<String>,
    pub scaled_image_central: bool,
    /// Generator `ψ` of `Ξ₁` with `τ₁(PS(f₁)(λk), ψ) ∉ 2πZ`.
    pub witness: Vec<String>,
    /// `W(λk) - 1` is mapped to zero by `Δ(PS(f₂))`.
    pub pushes_to_zero: bool,
    pub certificate: IdealCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoGoCertificate {
    pub wedge: String,
    pub f1: String,
    pub f2: String,
    /// Kernel of `PS(f₂)`: every quotientable subfunctor making `f₂` injective contains it.
    pub kernel: MixedGroup,
    pub kernel_in_radical: bool,
    /// `None` when no obstruction exists in this diagram.
    pub obstruction: Option<Obstruction>,
}

impl NoGoCertificate {
    pub fn found(&self) -> bool {
        self.obstruction.is_some()
    }
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn nogo_run(d: NoGoDiagram<'_>) -> Result<NoGoCertificate, GaugeError> {
    let (f1, f2) = (d.f1, d.f2);
    if f1.source().object().name != f2.source().object().name
        || f1.source().pag() != f2.source().pag()
    {
        return Err(GaugeError::NotAWedge {
            f1: f1.name().into(),
            f2: f2.name().into(),
        });
    }
    let xi3 = f1.source().pag();
    let xi1 = f1.target().pag();
    let kernel = f2.induced().kernel();
    let radical3 = xi3.radical();
    if let Some(generator) = kernel
        .generators()
        .columns()
        .iter()
        .position(|g| !radical3.contains(g))
    {
        return Err(GaugeError::KernelOutsideRadical {
            object: f1.source().name().into(),
            generator,
        });
    }
    let kernel_in_radical = true;
    let radical1 = xi1.radical();
    let center1 = xi1.center();
    let witnesses = xi1.group().generators().columns();

    // divisible generators first: they can be rescaled by any λ
    let candidates = kernel
        .divisible_gens()
        .columns()
        .into_iter()
        .map(|k| (k, true))
        .chain(kernel.free_gens().columns().into_iter().map(|k| (k, false)));
    let mut obstruction = None;
    for (k, divisible) in candidates {
        let image = f1.induced().apply(&k);
        if radical1.contains(&image) {
            continue;
        }
        let Some((g, v)) = witnesses
            .iter()
            .map(|g| (g, xi1.pairing(&image, g)))
            .find(|(_, v)| !v.is_zero())
        else {
            continue;
        };
        // orient the witness so the pairing is positive
        let psi: Vec<BigRational> = if v.is_negative() {
            g.iter().map(|x| -x).collect()
        } else {
            g.clone()
        };
        let psi = &psi;
        let lambda = if divisible {
            BigRational::one() / (v.abs() * BigRational::from_integer(2.into()))
        } else {
            BigRational::one()
        };
        let scaled_k: Vec<BigRational> = k.iter().map(|x| x * &lambda).collect();
        let scaled: Vec<BigRational> = image.iter().map(|x| x * &lambda).collect();
        let scaled_central = center1.contains(&scaled);
        if scaled_central {
            continue;
        }
        let cert = match ideal_unit_certificate(xi1, &scaled, psi) {
            Ok(c) => c,
            Err(crate::weyl::WeylError::Commuting) => continue,
            Err(e) => return Err(e.into()),
        };
        let generator = WeylElement::weyl(xi3, &scaled_k)?.sub(&WeylElement::unit(xi3))?;
        let pushes_to_zero = generator.push(f2.induced())?.is_empty();
        obstruction = Some(Obstruction {
            k: strings(&k),
            image: strings(&image),
            image_in_radical: false,
            lambda: format_rational(&lambda),
            scaled_image: strings(&scaled),
            scaled_image_central: scaled_central,
            witness: strings(psi),
            pushes_to_zero,
            certificate: cert,
        });
        break;
    }
    Ok(NoGoCertificate {
        wedge: f1.source().name().into(),
        f1: f1.name().into(),
        f2: f2.name().into(),
        kernel,
        kernel_in_radical,
        obstruction,
    })
}
