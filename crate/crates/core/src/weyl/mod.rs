//! Exact Weyl algebras `Δ(B, τ)` with cyclotomic coefficients.

mod algebra;
mod certificate;
mod cyclotomic;

pub use algebra::{
    ccr_push, is_central_symbol, ApproxWeylElement, WeylCoefficient, WeylElement, WeylSum,
    APPROX_TOLERANCE,
};
pub use certificate::{ideal_unit_certificate, IdealCertificate, IdealStep};
pub use cyclotomic::CyclotomicScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("Weyl symbols of different groups cannot be combined")]
    GroupMismatch,
    #[error("label is not an element of the group")]
    NotAMember,
    #[error("elements commute; no certificate")]
    Commuting,
    #[error("certificate step {step} does not re-verify")]
    CertificateStep { step: usize },
    #[error("center computation and commutator evaluation disagree")]
    CenterDisagreement,
}
