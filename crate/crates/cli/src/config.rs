//! INI-style experiment configuration.
//!
//! ```ini
//! [space]
//! model = euclidean        # or halfplane
//! dim = 1                  # halfplane is always 2
//! tolerance = 1e-12
//!
//! [mapping]
//! name = linear:q=1/3,p=0
//! fixed_point = 0          # optional, space-separated coordinates
//!
//! [algorithm]
//! kind = mann              # picard | mann | ishikawa | xunoor
//! alpha = const:0.5        # const:<float> | harmonic
//!
//! [run]
//! x0 = 1
//! max_iter = 200
//! tol = 1e-12
//! seed = 0
//! verbosity = 0
//! ```
//!
//! Lines starting with `#` or `;` are comments. Unknown sections or keys,
//! duplicated keys, and values out of range are errors.

use std::fmt;

use fixrate::mapping::resolve;
use fixrate::{AlgorithmKind, ModelTag, Point, Schedule};
use thiserror::Error;

use crate::format::fmt_float;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSection {
    pub model: ModelTag,
    pub dim: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappingSection {
    pub name: String,
    pub fixed_point: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSection {
    pub kind: AlgorithmKind,
    pub alpha: Option<Schedule<f64>>,
    pub beta: Option<Schedule<f64>>,
    pub gamma: Option<Schedule<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub x0: Vec<f64>,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub verbosity: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub space: SpaceSection,
    pub mapping: MappingSection,
    pub algorithm: AlgorithmSection,
    pub run: RunSection,
}

const SECTIONS: [(&str, &[&str]); 4] = [
    ("space", &["model", "dim", "tolerance"]),
    ("mapping", &["name", "fixed_point"]),
    ("algorithm", &["kind", "alpha", "beta", "gamma"]),
    ("run", &["x0", "max_iter", "tol", "seed", "verbosity"]),
];

struct Entry {
    section: &'static str,
    key: &'static str,
    value: String,
    line: usize,
}

struct Entries(Vec<Entry>);

impl Entries {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.0.iter().find(|e| e.section == section && e.key == key)
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry, ConfigError> {
        self.get(section, key).ok_or_else(|| ConfigError::Semantic(format!("missing [{section}] {key}")))
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, msg: msg.into() }
}

fn lex(text: &str) -> Result<Entries, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut section: Option<(&'static str, &'static [&'static str])> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') || l.starts_with(';') {
            continue;
        }
        if let Some(rest) = l.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| syntax(line, "unterminated section header"))?.trim();
            let found = SECTIONS.iter().find(|(s, _)| *s == name).ok_or_else(|| syntax(line, format!("unknown section [{name}]")))?;
            section = Some(*found);
            continue;
        }
        let (key, value) = l.split_once('=').ok_or_else(|| syntax(line, "expected key = value"))?;
        let (sec, keys) = section.ok_or_else(|| syntax(line, "key outside of any section"))?;
        let key = key.trim();
        let key = *keys.iter().find(|k| **k == key).ok_or_else(|| syntax(line, format!("unknown key '{key}' in [{sec}]")))?;
        let value = value.split(" #").next().unwrap_or("").trim().to_string();
        if entries.iter().any(|e| e.section == sec && e.key == key) {
            return Err(syntax(line, format!("duplicate key '{key}' in [{sec}]")));
        }
        entries.push(Entry { section: sec, key, value, line });
    }
    Ok(Entries(entries))
}

fn number<T: std::str::FromStr>(e: &Entry) -> Result<T, ConfigError> {
    e.value.parse().map_err(|_| syntax(e.line, format!("{}: bad number '{}'", e.key, e.value)))
}

fn float(e: &Entry) -> Result<f64, ConfigError> {
    let v: f64 = number(e)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(syntax(e.line, format!("{}: value must be finite", e.key)))
    }
}

fn coords(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    let v = e
        .value
        .split_whitespace()
        .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| syntax(e.line, format!("{}: expected space-separated numbers", e.key)))?;
    if v.is_empty() {
        return Err(syntax(e.line, format!("{}: empty point", e.key)));
    }
    Ok(v)
}

fn schedule(e: Option<&Entry>, symbol: &str) -> Result<Option<Schedule<f64>>, ConfigError> {
    let Some(e) = e else { return Ok(None) };
    match e.value.parse::<Schedule<f64>>() {
        Ok(s) => Ok(Some(s)),
        Err(fixrate::Error::ScheduleOutOfRange(_)) => Err(ConfigError::Semantic(format!("(C1) requires {symbol} < 1"))),
        Err(err) => Err(syntax(e.line, format!("{}: {err}", e.key))),
    }
}

fn check_point(model: ModelTag, dim: usize, c: &[f64], what: &str) -> Result<(), ConfigError> {
    if c.len() != dim {
        return Err(ConfigError::Semantic(format!("{what} has {} coordinates, space dimension is {dim}", c.len())));
    }
    Point::from_coords(model, c.to_vec()).map(|_| ()).map_err(|e| ConfigError::Semantic(format!("{what}: {e}")))
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let en = lex(text)?;

    let model_e = en.require("space", "model")?;
    let model: ModelTag = model_e.value.parse().map_err(|_| syntax(model_e.line, format!("unknown model: {}", model_e.value)))?;
    let dim = match (model, en.get("space", "dim")) {
        (_, Some(e)) => number::<usize>(e)?,
        (ModelTag::Halfplane, None) => 2,
        (ModelTag::Euclidean, None) => 1,
    };
    if dim == 0 || (model == ModelTag::Halfplane && dim != 2) {
        return Err(ConfigError::Semantic(format!("dimension {dim} is not valid for the {model} model")));
    }
    let tolerance = en.get("space", "tolerance").map(float).transpose()?.unwrap_or(1e-12);
    if tolerance < 0.0 {
        return Err(ConfigError::Semantic("[space] tolerance must be nonnegative".into()));
    }

    let name = en.require("mapping", "name")?.value.clone();
    let fixed_point = en.get("mapping", "fixed_point").map(coords).transpose()?;

    let kind_e = en.require("algorithm", "kind")?;
    let kind: AlgorithmKind = kind_e.value.parse().map_err(|_| syntax(kind_e.line, format!("unknown algorithm: {}", kind_e.value)))?;
    let alpha = schedule(en.get("algorithm", "alpha"), "αₙ")?;
    let beta = schedule(en.get("algorithm", "beta"), "βₙ")?;
    let gamma = schedule(en.get("algorithm", "gamma"), "γₙ")?;
    let (na, nb, ng) = kind.needs();
    for (needed, present, key) in [(na, alpha.is_some(), "alpha"), (nb, beta.is_some(), "beta"), (ng, gamma.is_some(), "gamma")] {
        if needed && !present {
            return Err(ConfigError::Semantic(format!("{kind} requires [algorithm] {key}")));
        }
    }

    let x0 = coords(en.require("run", "x0")?)?;
    let max_iter: usize = number(en.require("run", "max_iter")?)?;
    if max_iter == 0 {
        return Err(ConfigError::Semantic("[run] max_iter must be positive".into()));
    }
    let tol = float(en.require("run", "tol")?)?;
    if tol <= 0.0 {
        return Err(ConfigError::Semantic("[run] tol must be positive".into()));
    }
    let seed = en.get("run", "seed").map(number::<u64>).transpose()?.unwrap_or(0);
    let verbosity = en.get("run", "verbosity").map(number::<u8>).transpose()?.unwrap_or(0);

    check_point(model, dim, &x0, "x0")?;
    if let Some(p) = &fixed_point {
        check_point(model, dim, p, "fixed_point")?;
    }
    let entry = resolve::<f64>(&name).map_err(|e| ConfigError::Semantic(e.to_string()))?;
    let ms = entry.mapping.space();
    if ms.tag() != model || ms.dim() != dim {
        return Err(ConfigError::Semantic(format!("mapping {name} lives in {} dimension {}, not the configured space", ms.tag(), ms.dim())));
    }

    Ok(ExperimentConfig {
        space: SpaceSection { model, dim, tolerance },
        mapping: MappingSection { name, fixed_point },
        algorithm: AlgorithmSection { kind, alpha, beta, gamma },
        run: RunSection { x0, max_iter, tol, seed, verbosity },
    })
}

fn join(c: &[f64]) -> String {
    c.iter().map(|&v| fmt_float(v)).collect::<Vec<_>>().join(" ")
}

fn sched(s: &Schedule<f64>) -> String {
    match s {
        Schedule::Constant(c) => format!("const:{}", fmt_float(*c)),
        Schedule::Harmonic => "harmonic".into(),
    }
}

/// Canonical text form; `parse_config` reads it back to an equal value.
impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[space]")?;
        writeln!(f, "model = {}", self.space.model)?;
        writeln!(f, "dim = {}", self.space.dim)?;
        writeln!(f, "tolerance = {}", fmt_float(self.space.tolerance))?;
        writeln!(f, "\n[mapping]")?;
        writeln!(f, "name = {}", self.mapping.name)?;
        if let Some(p) = &self.mapping.fixed_point {
            writeln!(f, "fixed_point = {}", join(p))?;
        }
        writeln!(f, "\n[algorithm]")?;
        writeln!(f, "kind = {}", self.algorithm.kind)?;
        for (key, s) in [("alpha", &self.algorithm.alpha), ("beta", &self.algorithm.beta), ("gamma", &self.algorithm.gamma)] {
            if let Some(s) = s {
                writeln!(f, "{key} = {}", sched(s))?;
            }
        }
        writeln!(f, "\n[run]")?;
        writeln!(f, "x0 = {}", join(&self.run.x0))?;
        writeln!(f, "max_iter = {}", self.run.max_iter)?;
        writeln!(f, "tol = {}", fmt_float(self.run.tol))?;
        writeln!(f, "seed = {}", self.run.seed)?;
        writeln!(f, "verbosity = {}", self.run.verbosity)
    }
}
