//! Scenario files: objects, morphisms and the analyses to run on them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use pag_core::cech::{MorphismBody, SpaceDescriptor, SpaceModel, SpaceMorphism};
use pag_core::gauge::{
    build_observable_model, BundleMorphism, BundleObject, Configuration, ObservableModel, RhoPolicy,
};
use pag_core::linalg::Matrix;
use pag_core::scalar::serde_rational;
use pag_core::{RatMatrix, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ValidationFailure};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default = "default_dim")]
    pub dim_m: usize,
    #[serde(default)]
    pub objects: Vec<ObjectSpec>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal: Option<String>,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
}

fn default_dim() -> usize {
    4
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub name: String,
    pub space: SpaceDescriptor,
    #[serde(default)]
    pub compact_cauchy: bool,
    /// Defaults to `pd_default` for compact Cauchy surfaces, `zero` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoSpec>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub q_squared: Option<Rational>,
    #[serde(default)]
    pub dyn_pairs: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoSpec {
    Policy(RhoName),
    Matrix(#[serde(with = "serde_rational::matrix")] Vec<Vec<Rational>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoName {
    PdDefault,
    Zero,
}

mod opt_rational {
    use pag_core::scalar::serde_rational;
    use pag_core::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => serde_rational::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "serde_rational")] Rational);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub from: String,
    pub to: String,
    pub map: MapSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSpec {
    VertexMap(Vec<usize>),
    /// Pullback matrices `H^k(target) → H^k(source)` per degree.
    Pullbacks(BTreeMap<usize, PullbackMatrix>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PullbackMatrix(#[serde(with = "serde_rational::matrix")] pub Vec<Vec<Rational>>);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Analysis {
    Cohomology {
        object: String,
    },
    Model {
        object: String,
    },
    Locality {
        morphism: String,
    },
    Nogo {
        f1: String,
        f2: String,
    },
    Hk,
    Separate {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        object: Option<String>,
        left: Configuration,
        right: Configuration,
    },
    WeylEval {
        object: String,
        factors: Vec<Factor>,
    },
}

impl Analysis {
    pub fn command(&self) -> Command {
        match self {
            Analysis::Cohomology { .. } => Command::Cohomology,
            Analysis::Model { .. } => Command::Model,
            Analysis::Locality { .. } => Command::Locality,
            Analysis::Nogo { .. } => Command::Nogo,
            Analysis::Hk => Command::Hk,
            Analysis::Separate { .. } => Command::Separate,
            Analysis::WeylEval { .. } => Command::WeylEval,
        }
    }
}

/// One factor of a Weyl product: `coeff · W(b)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub element: Option<Vec<Rational>>,
    /// Topological charge symbol of a charge basis class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge_index: Option<usize>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub coeff: Option<Rational>,
}

mod opt_vec {
    use pag_core::scalar::serde_rational;
    use pag_core::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_rational::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "serde_rational::vec")] Vec<Rational>);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Cohomology,
    Model,
    Locality,
    Nogo,
    Hk,
    Separate,
    WeylEval,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cohomology => "cohomology",
            Command::Model => "model",
            Command::Locality => "locality",
            Command::Nogo => "nogo",
            Command::Hk => "hk",
            Command::Separate => "separate",
            Command::WeylEval => "weyl-eval",
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Analyses selected by `filter`. Without explicit entries for the
    /// command, object and morphism analyses default to every entity.
    pub fn selected(&self, filter: Option<Command>) -> Vec<Analysis> {
        let Some(cmd) = filter else {
            return self.analyses.clone();
        };
        let listed: Vec<Analysis> = self
            .analyses
            .iter()
            .filter(|a| a.command() == cmd)
            .cloned()
            .collect();
        if !listed.is_empty() {
            return listed;
        }
        match cmd {
            Command::Cohomology => self
                .objects
                .iter()
                .map(|o| Analysis::Cohomology {
                    object: o.name.clone(),
                })
                .collect(),
            Command::Model => self
                .objects
                .iter()
                .map(|o| Analysis::Model {
                    object: o.name.clone(),
                })
                .collect(),
            Command::Locality => self
                .morphisms
                .iter()
                .map(|m| Analysis::Locality {
                    morphism: m.name.clone(),
                })
                .collect(),
            Command::Hk if self.terminal.is_some() => vec![Analysis::Hk],
            _ => Vec::new(),
        }
    }
}

/// Scenario with every object and morphism built and validated.
pub struct Built {
    pub scenario: Scenario,
    pub models: Vec<Arc<ObservableModel>>,
    pub morphisms: Vec<BundleMorphism>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
}

impl Built {
    pub fn model(&self, name: &str) -> Option<&Arc<ObservableModel>> {
        self.object_index.get(name).map(|&i| &self.models[i])
    }

    pub fn object_position(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn morphism(&self, name: &str) -> Option<&BundleMorphism> {
        self.morphism_index.get(name).map(|&i| &self.morphisms[i])
    }

    pub fn morphism_spec(&self, name: &str) -> Option<&MorphismSpec> {
        self.morphism_index
            .get(name)
            .map(|&i| &self.scenario.morphisms[i])
    }
}

fn rational_matrix(rows: &[Vec<Rational>], cols: usize) -> Result<RatMatrix, String> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err("ragged matrix".into());
    }
    Matrix::from_rows(rows, cols).map_err(|e| e.to_string())
}

fn build_object(spec: &ObjectSpec, dim_m: usize) -> Result<ObservableModel, ValidationFailure> {
    let fail = |kind: &'static str, reason: String| ValidationFailure {
        entity: format!("object {}", spec.name),
        kind,
        reason,
    };
    let space = SpaceModel::from_descriptor(&spec.space, dim_m, spec.compact_cauchy)
        .map_err(|e| fail(crate::error::kind_of_cech(&e), e.to_string()))?;
    let rho = match &spec.rho {
        None if spec.compact_cauchy => RhoPolicy::PdDefault,
        None => RhoPolicy::Zero,
        Some(RhoSpec::Policy(RhoName::PdDefault)) => RhoPolicy::PdDefault,
        Some(RhoSpec::Policy(RhoName::Zero)) => RhoPolicy::Zero,
        Some(RhoSpec::Matrix(rows)) => {
            let cols = rows.first().map_or(space.betti(dim_m - 2), Vec::len);
            RhoPolicy::Matrix(rational_matrix(rows, cols).map_err(|r| fail("shape", r))?)
        }
    };
    let mut obj = BundleObject::new(spec.name.clone(), Arc::new(space), rho)
        .with_dyn_pairs(spec.dyn_pairs)
        .with_rho_defaulted(spec.rho.is_none());
    if let Some(q) = &spec.q_squared {
        obj = obj.with_q_squared(q.clone());
    }
    build_observable_model(&Arc::new(obj))
        .map_err(|e| fail(crate::error::kind_of_gauge(&e), e.to_string()))
}

fn build_morphism(
    spec: &MorphismSpec,
    source: &Arc<ObservableModel>,
    target: &Arc<ObservableModel>,
) -> Result<BundleMorphism, ValidationFailure> {
    let fail = |kind: &'static str, reason: String| ValidationFailure {
        entity: format!("morphism {}", spec.name),
        kind,
        reason,
    };
    let (src, tgt) = (source.object().space.clone(), target.object().space.clone());
    let map = match &spec.map {
        MapSpec::VertexMap(vm) => SpaceMorphism::simplicial(src, tgt, vm.clone()),
        MapSpec::Pullbacks(mats) => {
            let mut out = BTreeMap::new();
            for (&k, m) in mats {
                let cols = m.0.first().map_or(tgt.betti(k), Vec::len);
                out.insert(
                    k,
                    rational_matrix(&m.0, cols).map_err(|r| fail("shape", r))?,
                );
            }
            SpaceMorphism::new(src, tgt, MorphismBody::Matrices(out))
        }
    }
    .map_err(|e| fail(crate::error::kind_of_cech(&e), e.to_string()))?;
    BundleMorphism::new(spec.name.clone(), source.clone(), target.clone(), map)
        .map_err(|e| fail(crate::error::kind_of_gauge(&e), e.to_string()))
}

/// Builds every entity, collecting all failures instead of stopping at the first.
pub fn build(scenario: &Scenario) -> Result<Built, Vec<ValidationFailure>> {
    let mut failures = Vec::new();
    let mut object_index = HashMap::new();
    let mut models = Vec::new();
    for spec in &scenario.objects {
        if object_index.contains_key(&spec.name) {
            failures.push(ValidationFailure::reference(
                format!("object {}", spec.name),
                "duplicate name",
            ));
            continue;
        }
        object_index.insert(spec.name.clone(), models.len());
        match build_object(spec, scenario.dim_m) {
            Ok(m) => models.push(Some(Arc::new(m))),
            Err(f) => {
                failures.push(f);
                models.push(None);
            }
        }
    }
    let mut morphism_index = HashMap::new();
    let mut morphisms = Vec::new();
    for spec in &scenario.morphisms {
        let entity = format!("morphism {}", spec.name);
        if morphism_index.contains_key(&spec.name) {
            failures.push(ValidationFailure::reference(entity, "duplicate name"));
            continue;
        }
        let (Some(&i), Some(&j)) = (object_index.get(&spec.from), object_index.get(&spec.to))
        else {
            failures.push(ValidationFailure::reference(
                entity,
                "references an unknown object",
            ));
            continue;
        };
        morphism_index.insert(spec.name.clone(), morphisms.len());
        let (Some(src), Some(tgt)) = (&models[i], &models[j]) else {
            failures.push(ValidationFailure::reference(
                entity,
                "references an invalid object",
            ));
            morphisms.push(None);
            continue;
        };
        match build_morphism(spec, src, tgt) {
            Ok(m) => morphisms.push(Some(m)),
            Err(f) => {
                failures.push(f);
                morphisms.push(None);
            }
        }
    }
    if let Some(t) = &scenario.terminal {
        if !object_index.contains_key(t) {
            failures.push(ValidationFailure::reference(
                format!("terminal {t}"),
                "unknown object",
            ));
        }
    }
    for (i, a) in scenario.analyses.iter().enumerate() {
        let entity = format!("analysis {i} ({})", a.command().name());
        let unknown_object = |o: &String| !object_index.contains_key(o);
        let unknown_morphism = |m: &String| !morphism_index.contains_key(m);
        let bad = match a {
            Analysis::Cohomology { object }
            | Analysis::Model { object }
            | Analysis::WeylEval { object, .. } => unknown_object(object),
            Analysis::Separate { object, .. } => object.as_ref().is_some_and(unknown_object),
            Analysis::Locality { morphism } => unknown_morphism(morphism),
            Analysis::Nogo { f1, f2 } => unknown_morphism(f1) || unknown_morphism(f2),
            Analysis::Hk => {
                if scenario.terminal.is_none() {
                    failures.push(ValidationFailure::reference(
                        entity.clone(),
                        "needs a terminal object",
                    ));
                }
                false
            }
        };
        if bad {
            failures.push(ValidationFailure::reference(
                entity,
                "references an unknown entity",
            ));
        }
    }
    if !failures.is_empty() {
        return Err(failures);
    }
    Ok(Built {
        scenario: scenario.clone(),
        models: models.into_iter().map(Option::unwrap).collect(),
        morphisms: morphisms.into_iter().map(Option::unwrap).collect(),
        object_index,
        morphism_index,
    })
}
