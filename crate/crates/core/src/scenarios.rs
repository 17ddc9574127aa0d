//! Scenario files: a vector field on an open domain, optional morphisms,
//! fixture expectations and default configuration, stored as TOML.
//!
//! The schema is documented in `docs/scenario-format.md`. Built-in
//! scenarios are embedded from `scenarios/*.toml`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::completion::{CompletionConfig, CompletionError, MorphismSpec};
use crate::expr::{parse_expression, parse_predicate, Expression, ParseError};
use crate::geometry::{GeometryError, ManifoldSpec, TaggedPoint, VectorFieldSpec};
use crate::report::ReportSettings;
use crate::separability::{SeparabilityConfig, VerdictKind};

pub const SCHEMA_VERSION: u32 = 1;

const BUILTINS: &[(&str, &str)] = &[
    ("example2", include_str!("../scenarios/example2.toml")),
    ("example3", include_str!("../scenarios/example3.toml")),
    ("blowup1d", include_str!("../scenarios/blowup1d.toml")),
    ("rotation2d", include_str!("../scenarios/rotation2d.toml")),
    ("linear1d", include_str!("../scenarios/linear1d.toml")),
];

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    UnsupportedVersion(u32),
    #[error("{path}: {error}")]
    Expression { path: String, error: ParseError },
    #[error("{path}: {error}")]
    Geometry { path: String, error: GeometryError },
    #[error("morphisms.{name}: {error}")]
    Morphism { name: String, error: CompletionError },
    #[error("{0}")]
    Invalid(String),
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
}

/// Where a fixture expectation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Read off a worked example of the construction.
    WorkedExample,
    /// Follows from a closed-form flow.
    ClosedForm,
    /// Follows from a symmetry of the scenario.
    Symmetry,
    /// Immediate from definitions.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EscapeFixture {
    pub x0: Vec<f64>,
    pub t: f64,
    pub escape_time: f64,
    pub tol: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointFixture {
    pub x0: Vec<f64>,
    pub t: f64,
    pub expected: Vec<f64>,
    pub tol: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamePointFixture {
    pub p: TaggedPoint,
    pub q: TaggedPoint,
    pub expected: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictFixture {
    pub p: TaggedPoint,
    pub q: TaggedPoint,
    pub expected: VerdictKind,
    pub provenance: Provenance,
}

/// A non-separable pair and the flow times along which it must stay so.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceFixture {
    pub p: TaggedPoint,
    pub q: TaggedPoint,
    pub times: Vec<f64>,
    pub provenance: Provenance,
}

/// Expected classification of one base location in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionFixture {
    pub at: Vec<f64>,
    pub classes: usize,
    pub region: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fixtures {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub escapes: Vec<EscapeFixture>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub endpoints: Vec<EndpointFixture>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub same_point: Vec<SamePointFixture>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub separability: Vec<VerdictFixture>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nonseparable_pairs: Vec<InvarianceFixture>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RegionFixture>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub completion: CompletionConfig,
    pub separability: SeparabilityConfig,
    pub report: ReportSettings,
}

fn always() -> String {
    "true".into()
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSection {
    pub dim: usize,
    #[serde(default = "always")]
    pub inside: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub rhs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub flow: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub dim: usize,
    #[serde(default = "always")]
    pub inside: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    pub rhs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSection {
    pub name: String,
    pub map: Vec<String>,
    #[serde(default = "yes")]
    pub claimed_equivariant: bool,
    pub target: TargetSection,
}

/// The on-disk form of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub manifold: ManifoldSection,
    pub field: FieldSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismSection>,
    #[serde(default)]
    pub fixtures: Fixtures,
    #[serde(default)]
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub field: VectorFieldSpec,
    pub morphisms: Vec<MorphismSpec>,
    pub fixtures: Fixtures,
    pub config: ScenarioConfig,
    source: ScenarioFile,
}

fn expr_list(path: &str, items: &[String]) -> Result<Vec<Expression>, ScenarioError> {
    items
        .iter()
        .enumerate()
        .map(|(i, src)| {
            parse_expression(src).map_err(|error| ScenarioError::Expression {
                path: format!("{path}[{i}]"),
                error,
            })
        })
        .collect()
}

fn build_manifold(
    path: &str,
    dim: usize,
    inside: &str,
    margin: Option<&str>,
) -> Result<ManifoldSpec, ScenarioError> {
    let inside = parse_predicate(inside).map_err(|error| ScenarioError::Expression {
        path: format!("{path}.inside"),
        error,
    })?;
    let margin = margin
        .map(|m| {
            parse_expression(m).map_err(|error| ScenarioError::Expression {
                path: format!("{path}.margin"),
                error,
            })
        })
        .transpose()?;
    ManifoldSpec::new(dim, inside, margin).map_err(|error| ScenarioError::Geometry {
        path: path.into(),
        error,
    })
}

impl Scenario {
    /// Validates a parsed scenario file: expressions parse, dimensions agree,
    /// the domain predicate is open, the field evaluates on its sample grid
    /// and every morphism claimed equivariant passes its spot check.
    pub fn from_file(file: ScenarioFile) -> Result<Self, ScenarioError> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::UnsupportedVersion(file.schema_version));
        }
        let m = &file.manifold;
        let manifold = build_manifold("manifold", m.dim, &m.inside, m.margin.as_deref())?;
        let rhs = expr_list("field.rhs", &file.field.rhs)?;
        let oracle = file
            .oracle
            .as_ref()
            .map(|o| expr_list("oracle.flow", &o.flow))
            .transpose()?;
        let field = VectorFieldSpec::new(manifold, rhs, oracle).map_err(|error| ScenarioError::Geometry {
            path: "field".into(),
            error,
        })?;

        let mut morphisms = Vec::with_capacity(file.morphisms.len());
        for (i, ms) in file.morphisms.iter().enumerate() {
            let path = format!("morphisms[{i}].target");
            let t = &ms.target;
            let target_manifold = build_manifold(&path, t.dim, &t.inside, t.margin.as_deref())?;
            let target_rhs = expr_list(&format!("{path}.rhs"), &t.rhs)?;
            let target_oracle = t
                .oracle
                .as_ref()
                .map(|o| expr_list(&format!("{path}.oracle"), o))
                .transpose()?;
            let target = VectorFieldSpec::new(target_manifold, target_rhs, target_oracle)
                .map_err(|error| ScenarioError::Geometry { path, error })?;
            let map = expr_list(&format!("morphisms[{i}].map"), &ms.map)?;
            let f = MorphismSpec::new(&ms.name, &field, target, map, ms.claimed_equivariant).map_err(|error| {
                ScenarioError::Morphism {
                    name: ms.name.clone(),
                    error,
                }
            })?;
            if morphisms.iter().any(|g: &MorphismSpec| g.name == f.name) {
                return Err(ScenarioError::Invalid(format!("duplicate morphism name `{}`", f.name)));
            }
            morphisms.push(f);
        }
        if let Some(shadow) = &file.config.report.shadow {
            if !morphisms.iter().any(|f| &f.name == shadow) {
                return Err(ScenarioError::Invalid(format!(
                    "config.report.shadow: no morphism named `{shadow}`"
                )));
            }
        }

        Ok(Scenario {
            name: file.name.clone(),
            description: file.description.clone(),
            field,
            morphisms,
            fixtures: file.fixtures.clone(),
            config: file.config.clone(),
            source: file,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.source).expect("scenario files always serialize")
    }

    pub fn source(&self) -> &ScenarioFile {
        &self.source
    }

    pub fn morphism(&self, name: &str) -> Option<&MorphismSpec> {
        self.morphisms.iter().find(|f| f.name == name)
    }

    /// The morphism used to place completion points over base locations, if
    /// one is configured.
    pub fn shadow_morphism(&self) -> Option<&MorphismSpec> {
        self.config.report.shadow.as_deref().and_then(|n| self.morphism(n))
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::from_toml(&text)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    std::fs::write(path, scenario.to_toml()).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin(name: &str) -> Result<Scenario, ScenarioError> {
    let (_, text) = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ScenarioError::UnknownBuiltin(name.into()))?;
    Scenario::from_toml(text)
}

/// Resolves a built-in name, or failing that a path to a scenario file.
pub fn resolve(name_or_path: &str) -> Result<Scenario, ScenarioError> {
    match builtin(name_or_path) {
        Err(ScenarioError::UnknownBuiltin(_)) if Path::new(name_or_path).exists() => load_scenario(name_or_path),
        other => other,
    }
}
