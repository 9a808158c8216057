use pag_core::cech::CechError;
use pag_core::gauge::GaugeError;
use pag_core::presymplectic::PresymplecticError;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    pub entity: String,
    /// `constructor`, `shape`, `compatibility`, `reference` or `invalid`.
    pub kind: &'static str,
    pub reason: String,
}

impl ValidationFailure {
    pub fn reference(entity: String, reason: &str) -> Self {
        ValidationFailure {
            entity,
            kind: "reference",
            reason: reason.into(),
        }
    }
}

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} [{}]: {}", self.entity, self.kind, self.reason)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed:\n  {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  "))]
    Validation(Vec<ValidationFailure>),
    #[error("{analysis}: {message}")]
    Precondition { analysis: String, message: String },
    #[error("non-local verdict for {}", .0.join(", "))]
    NonLocal(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(fs) => fs.first().map_or(8, |f| kind_exit_code(f.kind)),
            CliError::Precondition { .. } => 3,
            CliError::NonLocal(_) => 4,
        }
    }
}

/// Exit code of a validation failure kind; the first failure decides.
pub fn kind_exit_code(kind: &str) -> i32 {
    match kind {
        "constructor" => 5,
        "shape" => 6,
        "compatibility" => 7,
        _ => 8,
    }
}

pub fn kind_of_cech(e: &CechError) -> &'static str {
    match e {
        CechError::UnknownConstructor(_) => "constructor",
        CechError::PullbackShape { .. }
        | CechError::MissingPullback { .. }
        | CechError::DimensionMismatch { .. } => "shape",
        _ => "invalid",
    }
}

pub fn kind_of_gauge(e: &GaugeError) -> &'static str {
    match e {
        GaugeError::Compatibility { .. } | GaugeError::NotGroupMap { .. } => "compatibility",
        GaugeError::RhoShape { .. } | GaugeError::Presymplectic(PresymplecticError::Shape(_)) => {
            "shape"
        }
        GaugeError::Cech(c) => kind_of_cech(c),
        _ => "invalid",
    }
}
