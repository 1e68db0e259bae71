//! Scenario documents: a TOML table naming a check, a patch, fields and a
//! quadrature rule.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key `{key}` at line {line}, column {column}")]
    UnknownKey {
        key: String,
        line: usize,
        column: usize,
    },

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid scenario at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Ftc,
    Content,
    Green,
    Stokes,
    Gauss,
    Path,
    Identities,
    Monogenic,
    Cauchy,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Ftc => "ftc",
            Check::Content => "content",
            Check::Green => "green",
            Check::Stokes => "stokes",
            Check::Gauss => "gauss",
            Check::Path => "path",
            Check::Identities => "identities",
            Check::Monogenic => "monogenic",
            Check::Cauchy => "cauchy",
        }
    }

    /// Exit-status tolerance when the scenario gives none.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::Content => 1e-8,
            Check::Identities => 1e-6,
            Check::Cauchy => 1e-3,
            _ => 1e-5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleName {
    #[default]
    Gauss,
    Midpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig {
    pub rule: RuleName,
    pub q: usize,
    pub m: usize,
    /// Refinement levels of the fundamental-theorem table.
    pub levels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rule: RuleName::Gauss,
            q: 8,
            m: 8,
            levels: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationName {
    #[default]
    Positive,
    Negative,
}

/// A registry patch with its parameters; unused parameters must be absent.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationName>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<PatchSpec>,
}

/// A registry field or polynomial expression.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub kind: String,
    /// Ambient dimension; defaults to that of the patch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeName {
    #[default]
    Fd,
    Analytic,
}

/// Grid for the monogenicity certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub per_axis: usize,
    #[serde(default)]
    pub exclusion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub check: Check,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Dimension of the identities suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivatives: Option<DerivativeName>,
    /// Evaluation points of the Cauchy checks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub quadrature: QuadConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<PatchSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<PatchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSpec>,
}

impl Scenario {
    pub fn tolerance(&self) -> f64 {
        match (self.tolerance, self.check, self.derivatives) {
            (Some(t), _, _) => t,
            (None, Check::Identities, Some(DerivativeName::Analytic)) => 1e-12,
            (None, check, _) => check.default_tolerance(),
        }
    }

    /// Ambient dimension of the scenario's geometry.
    pub fn ambient_dim(&self) -> Option<usize> {
        if self.check == Check::Identities {
            return self.dim;
        }
        self.patch
            .as_ref()
            .or(self.curves.first())
            .and_then(|p| registry::patch_dims(p).ok())
            .map(|(_, n)| n)
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

fn unknown_key(message: &str) -> Option<String> {
    let rest = message.split("unknown field `").nth(1)?;
    Some(rest.split('`').next()?.to_string())
}

/// Parses and validates a scenario; every registry reference is resolved and
/// every dimension checked.
pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    if let Err(e) = text.parse::<toml::Table>() {
        let (line, column) = line_col(text, e.span().map_or(0, |s| s.start));
        return Err(ConfigError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        });
    }
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let (line, column) = line_col(text, e.span().map_or(0, |s| s.start));
        match unknown_key(e.message()) {
            Some(key) => ConfigError::UnknownKey { key, line, column },
            None => ConfigError::Schema {
                line,
                column,
                message: e.message().trim().to_string(),
            },
        }
    })?;
    registry::validate(&scenario)?;
    Ok(scenario)
}

/// The canonical TOML text of a scenario, defaults written out.
pub fn print_scenario(s: &Scenario) -> String {
    toml::to_string(s).expect("scenarios serialize")
}
