//! Observable groups of Abelian gauge theory on finite cohomological data,
//! induced morphisms, and the locality, no-go and quotient constructions.

mod hk;
mod morphism;
mod nogo;
mod object;
mod separation;

pub use hk::{hk_quotient, HKDiagram, HKMorphism, HKObject, HKReport};
pub use morphism::{
    induced_observable_morphism, locality_check, BundleMorphism, LocalityReport, Verdict,
};
pub use nogo::{nogo_run, NoGoCertificate, NoGoDiagram, Obstruction};
pub use object::{build_observable_model, BundleObject, ModelSummary, ObservableModel, RhoPolicy};
pub use separation::{
    gauge_equivalent, is_gauge_invariant, separate_configurations, Configuration, Descriptor,
    Separation,
};

use crate::cech::CechError;
use crate::presymplectic::PresymplecticError;
use crate::weyl::WeylError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaugeError {
    #[error("object {object}: cannot resolve holonomy policy: {reason}")]
    UnresolvablePolicy { object: String, reason: String },
    #[error("object {object}: rho has shape {found:?}, expected {expected:?}")]
    RhoShape {
        object: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("object {object}: charge q² must be positive")]
    NonPositiveCharge { object: String },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("morphism {morphism}: region map does not match the objects")]
    SpaceMismatch { morphism: String },
    #[error("morphism {morphism}: objects with dynamical sectors cannot be mapped")]
    DynamicalSectorInMorphism { morphism: String },
    #[error(
        "morphism {morphism}: holonomy maps incompatible at AB index {ab}, charge index {charge}"
    )]
    Compatibility {
        morphism: String,
        ab: usize,
        charge: usize,
    },
    #[error("morphism {morphism}: generator {generator} does not map into the target group")]
    NotGroupMap { morphism: String, generator: usize },
    #[error("morphism {morphism}: triangle over the terminal object does not commute")]
    NonCommutingTriangle { morphism: String },
    #[error("object {object}: kernel generator {generator} is not in the radical")]
    KernelOutsideRadical { object: String, generator: usize },
    #[error("object {object}: no morphism to the terminal object")]
    MissingTerminalMorphism { object: String },
    #[error("{f1} and {f2} do not share a source")]
    NotAWedge { f1: String, f2: String },
    #[error("configurations have different lengths")]
    LengthMismatch,
    #[error(transparent)]
    Cech(#[from] CechError),
    #[error(transparent)]
    Presymplectic(#[from] PresymplecticError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}
