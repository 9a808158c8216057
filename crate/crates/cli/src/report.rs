use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{run_analysis, AnalysisEntry, Output};
use crate::error::{CliError, ValidationFailure};
use crate::scenario::{build, Built, Command, Scenario};

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    /// SHA-256 of the scenario file bytes.
    pub hash: String,
    pub validation: ValidationSummary,
    pub analyses: Vec<AnalysisEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationSummary {
    pub valid: bool,
    pub objects: Vec<ObjectLine>,
    pub morphisms: Vec<MorphismLine>,
    pub analyses: usize,
    pub failures: Vec<ValidationFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectLine {
    pub name: String,
    pub space: String,
    pub ab_rank: usize,
    pub charge_rank: usize,
    pub dyn_pairs: usize,
    pub rho_policy: &'static str,
    pub relies_on_zero_default: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismLine {
    pub name: String,
    pub from: String,
    pub to: String,
}

pub fn scenario_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

impl Report {
    pub fn non_local(&self) -> Vec<String> {
        self.analyses
            .iter()
            .filter_map(|a| a.non_local().map(str::to_string))
            .collect()
    }

    pub fn verified(&self) -> bool {
        self.analyses.iter().all(AnalysisEntry::verified)
    }
}

fn summary(built: &Built) -> ValidationSummary {
    ValidationSummary {
        valid: true,
        objects: built
            .models
            .iter()
            .map(|m| ObjectLine {
                name: m.name().into(),
                space: m.object().space.label().into(),
                ab_rank: m.ab_rank(),
                charge_rank: m.charge_rank(),
                dyn_pairs: m.dyn_pairs(),
                rho_policy: m.object().rho.label(),
                relies_on_zero_default: m.summary().relies_on_zero_default,
            })
            .collect(),
        morphisms: built
            .scenario
            .morphisms
            .iter()
            .map(|m| MorphismLine {
                name: m.name.clone(),
                from: m.from.clone(),
                to: m.to.clone(),
            })
            .collect(),
        analyses: built.scenario.analyses.len(),
        failures: Vec::new(),
    }
}

fn label(scenario: &Scenario, fallback: &str) -> String {
    if scenario.name.is_empty() {
        fallback.to_string()
    } else {
        scenario.name.clone()
    }
}

/// Validation only. Invalid scenarios still produce a report listing the
/// failures; the caller decides the exit status.
pub fn validate(text: &str, fallback_name: &str) -> Result<Report, CliError> {
    let scenario = Scenario::parse(text)?;
    let validation = match build(&scenario) {
        Ok(built) => summary(&built),
        Err(failures) => ValidationSummary {
            valid: false,
            objects: Vec::new(),
            morphisms: Vec::new(),
            analyses: scenario.analyses.len(),
            failures,
        },
    };
    Ok(Report {
        scenario: label(&scenario, fallback_name),
        hash: scenario_hash(text),
        validation,
        analyses: Vec::new(),
    })
}

/// Validates, then runs the selected analyses in file order.
pub fn analyze(
    text: &str,
    fallback_name: &str,
    filter: Option<Command>,
) -> Result<Report, CliError> {
    let scenario = Scenario::parse(text)?;
    let built = build(&scenario).map_err(CliError::Validation)?;
    let analyses = scenario
        .selected(filter)
        .iter()
        .enumerate()
        .map(|(i, a)| run_analysis(&built, i, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report {
        scenario: label(&scenario, fallback_name),
        hash: scenario_hash(text),
        validation: summary(&built),
        analyses,
    })
}

pub fn to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

fn matrix(rows: &[Vec<String>]) -> String {
    let inner: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", inner.join(", "))
}

fn vector(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "scenario {} (sha256 {})", report.scenario, report.hash);
    let v = &report.validation;
    if v.valid {
        let _ = writeln!(
            w,
            "valid: {} objects, {} morphisms, {} analyses",
            v.objects.len(),
            v.morphisms.len(),
            v.analyses
        );
        for o in &v.objects {
            let flag = if o.relies_on_zero_default {
                " [zero default]"
            } else {
                ""
            };
            let _ = writeln!(
                w,
                "  object {}: {} | AB rank {}, charge rank {}, dyn pairs {}, rho {}{}",
                o.name, o.space, o.ab_rank, o.charge_rank, o.dyn_pairs, o.rho_policy, flag
            );
        }
        for m in &v.morphisms {
            let _ = writeln!(w, "  morphism {}: {} -> {}", m.name, m.from, m.to);
        }
    } else {
        let _ = writeln!(w, "INVALID");
        for f in &v.failures {
            let _ = writeln!(w, "  {f}");
        }
    }
    for a in &report.analyses {
        let _ = writeln!(w);
        text_analysis(w, a);
        for c in &a.verification {
            let _ = writeln!(
                w,
                "  verify {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.check
            );
        }
    }
    out
}

fn text_analysis(w: &mut String, a: &AnalysisEntry) {
    match &a.result {
        Output::Cohomology(c) => {
            let _ = writeln!(
                w,
                "[{}] cohomology of {} = {} (m = {})",
                a.index, c.object, c.space, c.dim_m
            );
            for d in &c.degrees {
                let _ = writeln!(
                    w,
                    "  H^{} = {:<10} b = {}  dim H^{}_c = {}",
                    d.degree, d.integral, d.betti, d.degree, d.compact_support
                );
            }
        }
        Output::Model(m) => {
            let _ = writeln!(w, "[{}] model of {}", a.index, m.object);
            let _ = writeln!(
                w,
                "  AB rank {}, charge rank {}, dyn pairs {}, q^2 = {}",
                m.ab_rank,
                m.charge_rank,
                m.dyn_pairs,
                pag_core::scalar::format_rational(&m.q_squared)
            );
            let _ = writeln!(w, "  rho ({}) = {}", m.rho_policy, matrix(&m.rho));
            let _ = writeln!(
                w,
                "  center: {} lattice + {} divisible generators; radical: {} + {}",
                m.center.free_rank(),
                m.center.divisible_rank(),
                m.radical.free_rank(),
                m.radical.divisible_rank()
            );
            if m.relies_on_zero_default {
                let _ = writeln!(w, "  note: rho comes from the zero default");
            }
        }
        Output::Locality(r) => {
            let _ = writeln!(w, "[{}] locality of {}: {}", a.index, r.morphism, r.verdict);
            let _ = writeln!(
                w,
                "  H^2_c dims {:?}, push-forward {}",
                r.dims,
                matrix(&r.pushforward)
            );
            let _ = writeln!(
                w,
                "  push-forward injective: {}, model injective: {}, criteria agree: {}",
                r.pushforward_injective, r.model_injective, r.criteria_agree
            );
            let kernel = r.model_kernel.generators().transpose().to_strings();
            if !kernel.is_empty() {
                let _ = writeln!(w, "  model kernel generators {}", matrix(&kernel));
            }
        }
        Output::Nogo(c) => {
            let _ = writeln!(
                w,
                "[{}] no-go on wedge {} ({}, {})",
                a.index, c.wedge, c.f1, c.f2
            );
            let kernel = c.kernel.generators().transpose().to_strings();
            let _ = writeln!(w, "  forced kernel {}", matrix(&kernel));
            match &c.obstruction {
                None => {
                    let _ = writeln!(w, "  no obstruction found");
                }
                Some(o) => {
                    let _ = writeln!(w, "  k = {}, lambda = {}", vector(&o.k), o.lambda);
                    let _ = writeln!(
                        w,
                        "  PS(f1)(lambda k) = {} (central: {})",
                        vector(&o.scaled_image),
                        o.scaled_image_central
                    );
                    let _ = writeln!(w, "  witness psi = {}", vector(&o.witness));
                    for s in &o.certificate.steps {
                        let _ = writeln!(w, "  step: {}", s.claim);
                    }
                    let _ = writeln!(w, "  ideal contains {} * 1", o.certificate.scalar);
                }
            }
        }
        Output::Hk(r) => {
            let _ = writeln!(
                w,
                "[{}] quotient over terminal object {}",
                a.index, r.terminal
            );
            for o in &r.objects {
                let kernel = o.kernel.generators().transpose().to_strings();
                let _ = writeln!(
                    w,
                    "  {}: material charges {}, quotient rank {}",
                    o.name,
                    matrix(&kernel),
                    o.quotient.ambient_dim()
                );
            }
            for m in &r.morphisms {
                let _ = writeln!(
                    w,
                    "  {}: induced {} injective: {}",
                    m.name,
                    matrix(&m.matrix),
                    m.injective
                );
            }
            let _ = writeln!(w, "  all induced morphisms injective: {}", r.all_injective);
        }
        Output::Separate(s) => {
            let _ = write!(w, "[{}] separation: ", a.index);
            match &s.separation {
                pag_core::gauge::Separation::GaugeEquivalent => {
                    let _ = writeln!(w, "gauge-equivalent");
                }
                pag_core::gauge::Separation::Separated { descriptor, gap } => {
                    let _ = writeln!(
                        w,
                        "{}, pairing gap {}",
                        serde_json::to_string(descriptor).expect("serializes"),
                        pag_core::scalar::format_rational(gap)
                    );
                }
            }
        }
        Output::WeylEval(e) => {
            let _ = writeln!(w, "[{}] Weyl product in {}", a.index, e.object);
            for f in &e.factors {
                let _ = writeln!(
                    w,
                    "  {} W{} central: {}",
                    f.coeff,
                    vector(&f.element),
                    f.central
                );
            }
            let terms: Vec<String> = e
                .product
                .terms()
                .map(|(b, c)| {
                    let b: Vec<String> = b.iter().map(pag_core::scalar::format_rational).collect();
                    format!("({c}) W{}", vector(&b))
                })
                .collect();
            let _ = writeln!(
                w,
                "  product = {}",
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            );
            let _ = writeln!(
                w,
                "  trivial state = {}, state of a*a = {}",
                e.trivial_state, e.state_of_square
            );
            let _ = writeln!(
                w,
                "  l1 norm {} {}",
                if e.l1_norm_exact { "=" } else { "<=" },
                e.l1_norm
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn hash_is_sha256_of_the_bytes() {
        assert_eq!(
            scenario_hash(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn invalid_scenarios_still_report() {
        let r = validate(
            r#"{ "objects": [{ "name": "a", "space": "blob" }] }"#,
            "fallback",
        )
        .unwrap();
        assert_eq!(r.scenario, "fallback");
        assert!(!r.validation.valid);
        assert!(to_text(&r).contains("INVALID"));
    }

    #[test]
    fn text_report_mentions_verdicts() {
        let r = analyze(fixtures::get("prop48_m2").unwrap(), "x", None).unwrap();
        assert!(r.verified());
        assert_eq!(r.non_local(), vec!["incl".to_string()]);
        let text = to_text(&r);
        assert!(text.contains("NOT injective"), "{text}");
        assert!(text.contains("dims (2, 1)"), "{text}");
    }
}
