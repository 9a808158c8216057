//! Dispatch of scenario analyses to the core library, with a verification
//! section that re-checks each result from its published data.

use std::sync::Arc;

use num_traits::Zero;
use pag_core::cech::{pushforward_compact, SpaceMorphism};
use pag_core::gauge::{
    gauge_equivalent, hk_quotient, locality_check, nogo_run, separate_configurations,
    BundleMorphism, Configuration, HKDiagram, HKReport, LocalityReport, ModelSummary,
    NoGoCertificate, NoGoDiagram, ObservableModel, Separation, Verdict,
};
use pag_core::linalg::rank;
use pag_core::scalar::format_rational;
use pag_core::weyl::{CyclotomicScalar, WeylElement};
use pag_core::{RatMatrix, Rational};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{Analysis, Built, Factor};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub passed: bool,
}

fn check(name: impl Into<String>, passed: bool) -> Check {
    Check {
        check: name.into(),
        passed,
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Output {
    Cohomology(CohomologyReport),
    Model(Box<ModelSummary>),
    Locality(Box<LocalityReport>),
    Nogo(Box<NoGoCertificate>),
    Hk(Box<HKReport>),
    Separate(SeparationReport),
    WeylEval(WeylEvalReport),
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub object: String,
    pub space: String,
    pub dim_m: usize,
    pub components: usize,
    pub degrees: Vec<DegreeInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeInfo {
    pub degree: usize,
    pub integral: String,
    pub betti: usize,
    /// `dim H^k_c` in the same degree.
    pub compact_support: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub left: Configuration,
    pub right: Configuration,
    pub gauge_equivalent: bool,
    pub separation: Separation,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylEvalReport {
    pub object: String,
    pub factors: Vec<FactorReport>,
    pub product: WeylElement,
    pub trivial_state: CyclotomicScalar,
    /// `ω(a*a)` for the product `a`.
    pub state_of_square: CyclotomicScalar,
    pub l1_norm: String,
    pub l1_norm_exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub element: Vec<String>,
    pub coeff: String,
    pub central: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisEntry {
    pub index: usize,
    pub result: Output,
    pub verification: Vec<Check>,
}

impl AnalysisEntry {
    pub fn verified(&self) -> bool {
        self.verification.iter().all(|c| c.passed)
    }

    pub fn non_local(&self) -> Option<&str> {
        match &self.result {
            Output::Locality(r) if r.verdict == Verdict::NotInjective => Some(&r.morphism),
            _ => None,
        }
    }
}

fn precondition(index: usize, a: &Analysis, message: impl ToString) -> CliError {
    CliError::Precondition {
        analysis: format!("analysis {index} ({})", a.command().name()),
        message: message.to_string(),
    }
}

pub fn run_analysis(built: &Built, index: usize, a: &Analysis) -> Result<AnalysisEntry, CliError> {
    let fail = |e: &dyn ToString| precondition(index, a, e.to_string());
    let missing = |what: &str| precondition(index, a, format!("unknown {what}"));
    let (result, verification) = match a {
        Analysis::Cohomology { object } => {
            let m = built.model(object).ok_or_else(|| missing("object"))?;
            cohomology(m)
        }
        Analysis::Model { object } => {
            let m = built.model(object).ok_or_else(|| missing("object"))?;
            let summary = m.summary();
            let v = model_checks(m);
            (Output::Model(Box::new(summary)), v)
        }
        Analysis::Locality { morphism } => {
            let f = built
                .morphism(morphism)
                .ok_or_else(|| missing("morphism"))?;
            let r = locality_check(f).map_err(|e| fail(&e))?;
            let v = locality_checks(f, &r);
            (Output::Locality(Box::new(r)), v)
        }
        Analysis::Nogo { f1, f2 } => {
            let f1 = built.morphism(f1).ok_or_else(|| missing("morphism"))?;
            let f2 = built.morphism(f2).ok_or_else(|| missing("morphism"))?;
            let cert = nogo_run(NoGoDiagram { f1, f2 }).map_err(|e| fail(&e))?;
            let v = nogo_checks(f1, f2, &cert);
            (Output::Nogo(Box::new(cert)), v)
        }
        Analysis::Hk => {
            let d = hk_diagram(built).map_err(|m| precondition(index, a, m))?;
            let r = hk_quotient(&d).map_err(|e| fail(&e))?;
            let v = hk_checks(&d, &r);
            (Output::Hk(Box::new(r)), v)
        }
        Analysis::Separate {
            object,
            left,
            right,
        } => {
            if let Some(m) = object.as_ref().and_then(|o| built.model(o)) {
                let t = m.charge_rank();
                let b = m.ab_rank();
                for c in [left, right] {
                    if c.curvature_coords.len() != t || c.holonomy_coords.len() != b {
                        return Err(precondition(
                            index,
                            a,
                            format!("configuration lengths must be ({t}, {b}) for {}", m.name()),
                        ));
                    }
                }
            }
            let sep = separate_configurations(left, right).map_err(|e| fail(&e))?;
            let eq = gauge_equivalent(left, right);
            let v = separation_checks(left, right, eq, &sep);
            (
                Output::Separate(SeparationReport {
                    left: left.clone(),
                    right: right.clone(),
                    gauge_equivalent: eq,
                    separation: sep,
                }),
                v,
            )
        }
        Analysis::WeylEval { object, factors } => {
            let m = built.model(object).ok_or_else(|| missing("object"))?;
            weyl_eval(m, factors).map_err(|e| precondition(index, a, e))?
        }
    };
    Ok(AnalysisEntry {
        index,
        result,
        verification,
    })
}

fn cohomology(m: &Arc<ObservableModel>) -> (Output, Vec<Check>) {
    let space = &m.object().space;
    let dim = space.dim_m();
    let degrees: Vec<DegreeInfo> = (0..=dim)
        .map(|k| DegreeInfo {
            degree: k,
            integral: space.integer_cohomology(k).to_string(),
            betti: space.betti(k),
            compact_support: space.betti(dim - k),
        })
        .collect();
    let v = vec![
        check(
            "H^0 rank equals the number of components",
            degrees[0].betti == space.connected_components(),
        ),
        check("AB sector rank equals b_1", m.ab_rank() == space.betti(1)),
        check(
            "charge sector rank equals dim H^2_c",
            m.charge_rank() == degrees[2].compact_support,
        ),
    ];
    let report = CohomologyReport {
        object: m.name().into(),
        space: space.label().into(),
        dim_m: dim,
        components: space.connected_components(),
        degrees,
    };
    (Output::Cohomology(report), v)
}

fn model_checks(m: &ObservableModel) -> Vec<Check> {
    let pag = m.pag();
    let s = pag.pairing_matrix();
    let antisymmetric = s.transpose() == s.neg();
    let charges = m.charge_range();
    let charge_block_zero = charges
        .clone()
        .all(|i| charges.clone().all(|j| s[(i, j)].is_zero()));
    let center = pag.center();
    let radical = pag.radical();
    let gens = pag.group().generators().columns();
    let center_ok = center
        .generators()
        .columns()
        .iter()
        .all(|c| m.center_by_blocks(c));
    let radical_ok = radical
        .generators()
        .columns()
        .iter()
        .all(|c| m.radical_by_blocks(c));
    let radical_pairs = radical
        .generators()
        .columns()
        .iter()
        .all(|r| gens.iter().all(|g| pag.pairing(r, g).is_zero()));
    vec![
        check("pairing matrix is antisymmetric", antisymmetric),
        check("charge-charge block vanishes", charge_block_zero),
        check("center generators satisfy the block conditions", center_ok),
        check(
            "radical generators satisfy the block conditions",
            radical_ok,
        ),
        check(
            "radical generators pair to zero with every generator",
            radical_pairs,
        ),
    ]
}

fn locality_checks(f: &BundleMorphism, r: &LocalityReport) -> Vec<Check> {
    let t = f.induced().matrix();
    let kernel = r.model_kernel.generators().columns();
    let src = f.source().pag();
    let gens = src.group().generators().columns();
    let m = f.source().object().space.dim_m();
    let naturality = f
        .space_map()
        .pullback(m - 2)
        .map(|p| &p.transpose() == f.c_block())
        .unwrap_or(false);
    let push_ok = pushforward_compact(f.space_map(), 2)
        .map(|p| (rank(&p.matrix) == p.matrix.cols()) == r.pushforward_injective)
        .unwrap_or(false);
    vec![
        check(
            "T maps every kernel generator to zero",
            kernel
                .iter()
                .all(|k| t.mul_vec(k).iter().all(Zero::is_zero)),
        ),
        check(
            "kernel generators pair to zero with every source generator",
            kernel
                .iter()
                .all(|k| gens.iter().all(|g| src.pairing(k, g).is_zero())),
        ),
        check(
            "C-block is the transposed pullback in degree m-2",
            naturality,
        ),
        check(
            "push-forward rank matches the reported injectivity",
            push_ok,
        ),
    ]
}

fn nogo_checks(f1: &BundleMorphism, f2: &BundleMorphism, cert: &NoGoCertificate) -> Vec<Check> {
    let xi3 = f1.source().pag();
    let xi1 = f1.target().pag();
    let kernel = cert.kernel.generators().columns();
    let gens3 = xi3.group().generators().columns();
    let mut v = vec![
        check(
            "PS(f2) kills every kernel generator",
            kernel
                .iter()
                .all(|k| f2.induced().apply(k).iter().all(Zero::is_zero)),
        ),
        check(
            "kernel generators lie in the radical of the wedge object",
            kernel
                .iter()
                .all(|k| gens3.iter().all(|g| xi3.pairing(k, g).is_zero())),
        ),
    ];
    if let Some(ob) = &cert.obstruction {
        let c = &ob.certificate;
        let pairing = xi1.pairing(&c.phi, &c.psi);
        v.push(check(
            "scaled image pairs non-integrally with the witness",
            !pairing.is_integer(),
        ));
        v.push(check(
            "ideal certificate re-verifies",
            c.verify(xi1).is_ok(),
        ));
        v.push(check(
            "final element is a nonzero multiple of the unit",
            !c.scalar.is_zero(),
        ));
        v.push(check(
            "W(λk) - 1 is pushed to zero along f2",
            ob.pushes_to_zero,
        ));
    }
    v
}

/// The identity of the terminal object plus, for every other object, its
/// first declared morphism to the terminal object.
fn hk_diagram(built: &Built) -> Result<HKDiagram, String> {
    let tname = built
        .scenario
        .terminal
        .as_deref()
        .ok_or("scenario has no terminal object")?;
    let terminal = built.model(tname).ok_or("unknown terminal object")?.clone();
    let mut to_terminal = Vec::new();
    for m in &built.models {
        if m.name() == tname {
            let id = SpaceMorphism::identity(m.object().space.clone());
            let h = BundleMorphism::new(format!("id_{tname}"), m.clone(), m.clone(), id)
                .map_err(|e| e.to_string())?;
            to_terminal.push(h);
            continue;
        }
        let h = built
            .morphisms
            .iter()
            .find(|g| g.source().name() == m.name() && g.target().name() == tname)
            .ok_or_else(|| format!("object {}: no morphism to the terminal object", m.name()))?;
        to_terminal.push(h.clone());
    }
    let morphisms = built
        .morphisms
        .iter()
        .map(|g| {
            let i = built.object_position(g.source().name()).expect("validated");
            let j = built.object_position(g.target().name()).expect("validated");
            (i, j, g.clone())
        })
        .collect();
    Ok(HKDiagram {
        terminal,
        to_terminal,
        morphisms,
    })
}

fn hk_checks(d: &HKDiagram, r: &HKReport) -> Vec<Check> {
    let mut v = Vec::new();
    for (h, o) in d.to_terminal.iter().zip(&r.objects) {
        let kernel = o.kernel.generators().columns();
        let pag = h.source().pag();
        let gens = pag.group().generators().columns();
        v.push(check(
            format!("{}: kernel generators map to zero and pair to zero", o.name),
            kernel.iter().all(|k| {
                h.induced().apply(k).iter().all(Zero::is_zero)
                    && gens.iter().all(|g| pag.pairing(k, g).is_zero())
            }),
        ));
        v.push(check(
            format!("{}: projection annihilates the kernel", o.name),
            kernel
                .iter()
                .all(|k| o.projection.apply(k).iter().all(Zero::is_zero)),
        ));
    }
    for (m, (i, j, g)) in r.morphisms.iter().zip(&d.morphisms) {
        let lhs = d.to_terminal[*j].induced().matrix() * g.induced().matrix();
        v.push(check(
            format!("{}: triangle over the terminal object commutes", m.name),
            &lhs == d.to_terminal[*i].induced().matrix(),
        ));
        let src = &r.objects[*i].quotient;
        let gens = src.group().generators();
        let image: RatMatrix = m.induced.matrix() * &gens;
        v.push(check(
            format!(
                "{}: induced quotient map has full rank on generators",
                m.name
            ),
            rank(&image) == gens.cols(),
        ));
    }
    v
}

fn separation_checks(
    left: &Configuration,
    right: &Configuration,
    eq: bool,
    sep: &Separation,
) -> Vec<Check> {
    match sep {
        Separation::GaugeEquivalent => vec![check("configurations are gauge-equivalent", eq)],
        Separation::Separated { descriptor, gap } => {
            let recomputed = descriptor.pairing(left) - descriptor.pairing(right);
            vec![
                check("pairing gap recomputes", &recomputed == gap),
                check("pairing gap is not an integer", !gap.is_integer()),
                check("configurations are not gauge-equivalent", !eq),
            ]
        }
    }
}

fn weyl_eval(m: &Arc<ObservableModel>, factors: &[Factor]) -> Result<(Output, Vec<Check>), String> {
    let pag = m.pag();
    let mut product = WeylElement::unit(pag);
    let mut reports = Vec::new();
    let mut unitary = true;
    for (i, f) in factors.iter().enumerate() {
        let w = match (&f.element, f.charge_index) {
            (Some(b), None) => {
                if b.len() != pag.ambient_dim() {
                    return Err(format!(
                        "factor {i}: element has length {}, expected {}",
                        b.len(),
                        pag.ambient_dim()
                    ));
                }
                WeylElement::weyl(pag, b).map_err(|e| format!("factor {i}: {e}"))?
            }
            (None, Some(k)) => m
                .topological_charge(k)
                .map_err(|e| format!("factor {i}: {e}"))?,
            _ => {
                return Err(format!(
                    "factor {i}: give exactly one of element or charge_index"
                ))
            }
        };
        let (b, _) = w
            .terms()
            .next()
            .map(|(b, c)| (b.clone(), c.clone()))
            .expect("single symbol");
        unitary &= w.star().product(&w).map_err(|e| e.to_string())? == WeylElement::unit(pag);
        let coeff = f
            .coeff
            .clone()
            .unwrap_or_else(|| Rational::from_integer(1.into()));
        let central = pag_core::weyl::is_central_symbol(pag, &b).map_err(|e| e.to_string())?;
        let term = w.scale(&CyclotomicScalar::from_rational(coeff.clone()));
        product = product.product(&term).map_err(|e| e.to_string())?;
        reports.push(FactorReport {
            element: b.iter().map(format_rational).collect(),
            coeff: format_rational(&coeff),
            central,
        });
    }
    let square = product
        .star()
        .product(&product)
        .map_err(|e| e.to_string())?;
    let state_of_square = square.trivial_state();
    let sum_sq = product
        .terms()
        .fold(CyclotomicScalar::zero(), |acc, (_, c)| {
            acc + c.abs_squared()
        });
    let (norm, exact) = product.banach_norm();
    let bound_ok = match state_of_square.to_rational() {
        Some(s) => s <= &norm * &norm,
        // irrational state: the norm is already an upper bound, compare in floating point
        None => state_of_square.to_complex().re <= norm_f64(&norm).powi(2) + 1e-9,
    };
    let v = vec![
        check("every factor is unitary", unitary),
        check(
            "state of a*a equals the sum of squared moduli",
            state_of_square == sum_sq,
        ),
        check("state of a*a is bounded by the squared l1 norm", bound_ok),
    ];
    let report = WeylEvalReport {
        object: m.name().into(),
        factors: reports,
        trivial_state: product.trivial_state(),
        product,
        state_of_square,
        l1_norm: format_rational(&norm),
        l1_norm_exact: exact,
    };
    Ok((Output::WeylEval(report), v))
}

fn norm_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}
