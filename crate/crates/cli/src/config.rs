use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use fada_core::fada::Fada;
use fada_core::fga::{Ring, Torus};
use fada_core::formal_group::{FglKind, FormalGroupLaw};
use fada_core::poly::Poly;
use fada_core::root_system::{AffElem, RootSystem};

/// Bad input: reported with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
    #[error("{field}: line {line}, column {column}: {msg}")]
    Parse { field: String, line: usize, column: usize, msg: String },
    #[error("{0}")]
    Core(#[from] fada_core::Error),
}

impl ConfigError {
    pub fn field(field: &str, msg: impl Into<String>) -> Self {
        ConfigError::Field { field: field.into(), msg: msg.into() }
    }

    fn parse(field: &str, e: serde_json::Error) -> Self {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or_default().to_string();
        ConfigError::Parse { field: field.into(), line: e.line(), column: e.column(), msg }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RootSpec {
    Name(String),
    Type {
        #[serde(rename = "type")]
        ty: String,
    },
    Cartan {
        cartan: Vec<Vec<i32>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FglSpec {
    pub kind: String,
    #[serde(default)]
    pub degree: Option<u32>,
    /// `[i, j, "scalar"]` entries of a custom law.
    #[serde(default)]
    pub coefficients: Vec<(u32, u32, String)>,
}

/// A job as read from `--config`; command-line flags override it.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub root: Option<serde_json::Value>,
    pub fgl: Option<serde_json::Value>,
    pub torus: Option<String>,
    pub window: Option<u32>,
    pub degree: Option<u32>,
    pub series: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::field("--config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError::parse("--config", e))
    }
}

/// Everything a command needs, validated.
pub struct JobConfig {
    pub rs: Arc<RootSystem>,
    pub fgl: FormalGroupLaw,
    pub torus: Torus,
    pub window: u32,
    pub degree: u32,
    pub series: bool,
}

pub const MAX_WINDOW: u32 = 24;

impl JobConfig {
    pub fn ring(&self, torus: Torus) -> Ring {
        if self.series || matches!(self.fgl.kind(), FglKind::Hyperbolic | FglKind::Custom) {
            Ring::series(self.rs.clone(), torus, self.fgl.clone(), self.degree)
        } else {
            Ring::new(self.rs.clone(), torus, self.fgl.clone())
        }
    }

    pub fn fada(&self) -> Arc<Fada> {
        self.fada_on(self.torus)
    }

    pub fn fada_on(&self, torus: Torus) -> Arc<Fada> {
        Arc::new(Fada::new(Arc::new(self.ring(torus))))
    }

    /// Parses a word such as `010` (or `e` for the identity) and checks it
    /// is reduced.
    pub fn element(&self, field: &str, word: &str) -> Result<AffElem, ConfigError> {
        let word = parse_word(field, word, self.rs.rank())?;
        if !self.rs.is_reduced(&word) {
            return Err(ConfigError::field(field, format!("{word:?} is not reduced")));
        }
        Ok(self.rs.from_word(&word))
    }
}

pub fn parse_word(field: &str, s: &str, rank: usize) -> Result<Vec<u8>, ConfigError> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.chars()
        .filter(|c| *c != ',' && *c != ' ')
        .map(|c| match c.to_digit(10) {
            Some(d) if d as usize <= rank => Ok(d as u8),
            _ => Err(ConfigError::field(field, format!("'{c}' is not a simple index 0..={rank}"))),
        })
        .collect()
}

pub fn parse_root(field: &str, v: &serde_json::Value) -> Result<RootSystem, ConfigError> {
    let desc: RootSpec = serde_json::from_value(v.clone())
        .map_err(|_| ConfigError::field(field, "expected a type name, {\"type\": ...} or {\"cartan\": [[...]]}"))?;
    let rs = match desc {
        RootSpec::Name(n) | RootSpec::Type { ty: n } => RootSystem::from_type(&n),
        RootSpec::Cartan { cartan } => RootSystem::new(cartan),
    };
    rs.map_err(|e| ConfigError::field(field, e.to_string()))
}

/// A bare name or a JSON string value.
pub fn value_of(field: &str, s: &str) -> Result<serde_json::Value, ConfigError> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('"') {
        serde_json::from_str(s).map_err(|e| ConfigError::parse(field, e))
    } else {
        Ok(serde_json::Value::String(s.to_string()))
    }
}

pub fn parse_fgl(field: &str, v: &serde_json::Value, degree: u32) -> Result<FormalGroupLaw, ConfigError> {
    let desc = match v {
        serde_json::Value::String(s) => FglSpec { kind: s.clone(), degree: None, coefficients: Vec::new() },
        other => serde_json::from_value(other.clone()).map_err(|e| ConfigError::field(field, e.to_string()))?,
    };
    let degree = desc.degree.unwrap_or(degree);
    let law = match desc.kind.as_str() {
        "additive" => FormalGroupLaw::additive(),
        "multiplicative" => FormalGroupLaw::multiplicative(),
        "connective" => FormalGroupLaw::connective(),
        "hyperbolic" => FormalGroupLaw::hyperbolic(degree),
        "custom" => {
            let mut table = Vec::new();
            for (k, (i, j, c)) in desc.coefficients.iter().enumerate() {
                let p = Poly::parse_scalar(c).map_err(|e| ConfigError::field(&format!("{field}.coefficients[{k}]"), e))?;
                table.push((*i, *j, p));
            }
            FormalGroupLaw::custom(degree, &table).map_err(|e| ConfigError::field(field, e.to_string()))?
        }
        k => return Err(ConfigError::field(&format!("{field}.kind"), format!("unknown law '{k}'"))),
    };
    Ok(law)
}

pub fn parse_torus(field: &str, s: &str) -> Result<Torus, ConfigError> {
    match s {
        "small" => Ok(Torus::Small),
        "big" => Ok(Torus::Big),
        _ => Err(ConfigError::field(field, format!("'{s}' is neither small nor big"))),
    }
}
