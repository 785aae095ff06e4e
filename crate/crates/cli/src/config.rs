//! Flat `key = value` fit configuration.
//!
//! ```text
//! # known parameters
//! m = 1
//! s = 1
//! # free parameters with search box
//! unknown.epsilon = 0.1, 10
//! unknown.sigma_rate = 0.1, 10
//! # quantity, k, value[, weight]
//! obs = e_ab, 0.5, 1.2
//! truth.epsilon = 2
//! ```

use std::collections::BTreeMap;
use std::fmt;

use gaussent::cosmology::Variable;
use gaussent::entanglement::Quantity;
use gaussent::inverse::{FitProblem, FitSettings, Observation, Unknown};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, Copy)]
enum Origin {
    Line(usize),
    Flag,
}

impl Origin {
    fn line(self) -> Option<usize> {
        match self {
            Origin::Line(n) => Some(n),
            Origin::Flag => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub known: BTreeMap<Variable, f64>,
    pub unknown: BTreeMap<Variable, (f64, f64)>,
    pub observations: Vec<Observation>,
    pub truth: BTreeMap<Variable, f64>,
    pub settings: FitSettings,
}

fn fit_variable(name: &str, origin: Origin) -> Result<Variable, ConfigError> {
    match Variable::parse(name) {
        Some(Variable::K) => Err(err(origin.line(), "k is set per observation, not globally")),
        Some(v) => Ok(v),
        None => Err(err(origin.line(), format!("unknown parameter `{name}`"))),
    }
}

fn number(text: &str, what: &str, origin: Origin) -> Result<f64, ConfigError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| err(origin.line(), format!("`{}` is not a number (in {what})", text.trim())))
}

fn count(text: &str, what: &str, origin: Origin) -> Result<usize, ConfigError> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| err(origin.line(), format!("`{}` is not a count (in {what})", text.trim())))
}

impl FitConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = FitConfig {
            known: BTreeMap::new(),
            unknown: BTreeMap::new(),
            observations: Vec::new(),
            truth: BTreeMap::new(),
            settings: FitSettings::default(),
        };
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(Some(n), format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            if key != "obs" {
                let canonical = canonical_key(key);
                if let Some(first) = seen.insert(canonical, n) {
                    return Err(err(Some(n), format!("duplicate key `{key}` (first set on line {first})")));
                }
            }
            cfg.apply(key, value.trim(), Origin::Line(n))?;
        }
        Ok(cfg)
    }

    /// `key=value` from the command line; replaces whatever the file set.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| err(None, format!("--set expects key=value, got `{assignment}`")))?;
        let key = key.trim();
        if key == "obs" {
            return Err(err(None, "observations cannot be set from the command line"));
        }
        // a parameter is either known or unknown; the override decides which
        if let Some(v) = key.strip_prefix("unknown.").and_then(Variable::parse) {
            self.known.remove(&v);
        } else if let Some(v) = Variable::parse(key) {
            self.unknown.remove(&v);
        }
        self.apply(key, value.trim(), Origin::Flag)
    }

    fn apply(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let line = origin.line();
        if key == "obs" {
            let fields: Vec<&str> = value.split(',').map(str::trim).collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(err(line, "obs expects `quantity, k, value[, weight]`"));
            }
            let quantity = Quantity::parse(fields[0])
                .ok_or_else(|| err(line, format!("unknown quantity `{}`", fields[0])))?;
            let k = number(fields[1], "obs k", origin)?;
            let v = number(fields[2], "obs value", origin)?;
            let w = match fields.get(3) {
                Some(f) => number(f, "obs weight", origin)?,
                None => 1.0,
            };
            let obs = Observation::new(k, quantity, v, w).map_err(|e| err(line, e.to_string()))?;
            self.observations.push(obs);
            return Ok(());
        }
        if let Some(name) = key.strip_prefix("unknown.") {
            let var = fit_variable(name, origin)?;
            let (lo, hi) = value
                .split_once(',')
                .ok_or_else(|| err(line, format!("`{key}` expects `lower, upper`")))?;
            let bounds = (number(lo, key, origin)?, number(hi, key, origin)?);
            self.unknown.insert(var, bounds);
            return Ok(());
        }
        if let Some(name) = key.strip_prefix("truth.") {
            let var = fit_variable(name, origin)?;
            self.truth.insert(var, number(value, key, origin)?);
            return Ok(());
        }
        match key {
            "grid" => self.settings.grid_per_dim = count(value, key, origin)?,
            "refine_starts" => self.settings.refine_starts = count(value, key, origin)?,
            "max_evals" => self.settings.max_evals = count(value, key, origin)?,
            _ => match Variable::parse(key) {
                Some(_) => {
                    let var = fit_variable(key, origin)?;
                    self.known.insert(var, number(value, key, origin)?);
                }
                None => return Err(err(line, format!("unknown key `{key}`"))),
            },
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<FitProblem, ConfigError> {
        if self.observations.is_empty() {
            return Err(err(None, "no observations (add `obs = quantity, k, value` lines)"));
        }
        let known = self.known.iter().map(|(v, x)| (*v, *x)).collect();
        let unknown = self
            .unknown
            .iter()
            .map(|(v, (lo, hi))| Unknown {
                variable: *v,
                lower: *lo,
                upper: *hi,
            })
            .collect();
        FitProblem::new(self.observations.clone(), known, unknown).map_err(|e| err(None, e.to_string()))
    }
}

/// Aliases collapse so `m` and `mass` count as the same key.
fn canonical_key(key: &str) -> String {
    let canon = |name: &str| Variable::parse(name).map(|v| v.name().to_string());
    if let Some(rest) = key.strip_prefix("unknown.") {
        return format!("unknown.{}", canon(rest).unwrap_or_else(|| rest.to_string()));
    }
    if let Some(rest) = key.strip_prefix("truth.") {
        return format!("truth.{}", canon(rest).unwrap_or_else(|| rest.to_string()));
    }
    canon(key).unwrap_or_else(|| key.to_string())
}
