//! Run configuration: JSON document plus command-line overrides.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::potentials::{FamilyParams, GinocchioParams, MorseParams};
use crate::verify::{GridSpec, GINOCCHIO_BAND};

/// Configuration problems; always exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Crum,
    Darboux,
    Both,
    Si,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "yes")]
    pub node_scan: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub morse: f64,
    pub ginocchio: f64,
    pub residual: f64,
    pub si_condition: f64,
    pub ladder: f64,
    pub corollary: f64,
    pub wronskian: f64,
    pub wronskian_ginocchio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            morse: 1e-8,
            ginocchio: 1e-6,
            residual: 1e-6,
            si_condition: 1e-9,
            ladder: 1e-12,
            corollary: 1e-7,
            wronskian: 1e-9,
            wronskian_ginocchio: 1e-8,
        }
    }
}

impl Tolerances {
    fn set(&mut self, key: &str, v: f64) -> Result<(), ConfigError> {
        let slot = match key {
            "morse" => &mut self.morse,
            "ginocchio" => &mut self.ginocchio,
            "residual" => &mut self.residual,
            "si_condition" => &mut self.si_condition,
            "ladder" => &mut self.ladder,
            "corollary" => &mut self.corollary,
            "wronskian" => &mut self.wronskian,
            "wronskian_ginocchio" => &mut self.wronskian_ginocchio,
            _ => return invalid(format!("unknown tolerance `{key}`")),
        };
        *slot = v;
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let all = [
            self.morse,
            self.ginocchio,
            self.residual,
            self.si_condition,
            self.ladder,
            self.corollary,
            self.wronskian,
            self.wronskian_ginocchio,
        ];
        if all.iter().all(|t| *t > 0.0 && t.is_finite()) {
            Ok(())
        } else {
            invalid("all tolerances must be positive and finite")
        }
    }
}

/// Configuration as read from JSON; missing pieces get family defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Option<FamilySpec>,
    pub order: Option<usize>,
    pub method: Option<Method>,
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Half-width of the removed Ginocchio band in `y`.
    pub band: Option<f64>,
    /// Lets the flowed Hamiltonian use parameters without a bound state.
    #[serde(default)]
    pub allow_unbound_flow: bool,
}

/// Command-line overrides, applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub params: Vec<(String, f64)>,
    pub levels: Option<usize>,
    pub order: Option<usize>,
    pub method: Option<Method>,
    pub grid: Option<(f64, f64, usize)>,
    pub no_node_scan: bool,
    pub out: Option<PathBuf>,
    pub tols: Vec<(String, f64)>,
    pub band: Option<f64>,
    pub allow_unbound_flow: bool,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub params: FamilyParams,
    pub levels: usize,
    pub order: usize,
    pub method: Method,
    pub grid: GridSpec,
    pub band: f64,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub allow_unbound_flow: bool,
}

pub fn parse_key_value(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

pub fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected min,max,count, got `{s}`"));
    }
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
    let count = parts[2].parse::<usize>().map_err(|_| format!("`{}` is not a count", parts[2]))?;
    Ok((num(parts[0])?, num(parts[1])?, count))
}

pub fn load(path: Option<&Path>) -> Result<RunConfig, ConfigError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io { path: p.to_path_buf(), source })?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn default_params(name: &str) -> Result<BTreeMap<String, f64>, ConfigError> {
    let pairs: &[(&str, f64)] = match name {
        "morse" => &[("A", 2.0 * SQRT_2), ("alpha", 1.0)],
        "ginocchio" => &[("beta", 0.8), ("upsilon", 4.0)],
        other => return invalid(format!("unknown family `{other}` (expected morse or ginocchio)")),
    };
    Ok(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

fn family_params(name: &str, map: &BTreeMap<String, f64>) -> Result<FamilyParams, ConfigError> {
    let allowed: &[&str] = if name == "morse" { &["A", "alpha"] } else { &["beta", "upsilon"] };
    if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return invalid(format!("unknown {name} parameter `{k}` (expected {})", allowed.join(", ")));
    }
    let get = |k: &str| map.get(k).copied().ok_or_else(|| ConfigError::Invalid(format!("missing {name} parameter `{k}`")));
    Ok(match name {
        "morse" => FamilyParams::Morse(MorseParams { a: get("A")?, alpha: get("alpha")? }),
        _ => FamilyParams::Ginocchio(GinocchioParams { beta: get("beta")?, upsilon: get("upsilon")? }),
    })
}

pub fn resolve(cfg: RunConfig, ov: &Overrides) -> Result<Resolved, ConfigError> {
    let file_family = cfg.family.clone();
    let name = match (&ov.family, &file_family) {
        (Some(n), _) => n.to_lowercase(),
        (None, Some(f)) => f.name.to_lowercase(),
        (None, None) => return invalid("no family given (use --family or a config file)"),
    };
    let mut params = default_params(&name)?;
    let mut levels = None;
    if let Some(f) = file_family.filter(|f| f.name.to_lowercase() == name) {
        params.extend(f.params);
        levels = f.levels;
    }
    for (k, v) in &ov.params {
        params.insert(k.clone(), *v);
    }
    let params = family_params(&name, &params)?;
    let levels = ov.levels.or(levels).unwrap_or(if name == "morse" { 3 } else { 4 });

    let (dmin, dmax, dcount) = if name == "morse" { (-3.0, 3.0, 121) } else { (-2.5, 2.5, 101) };
    let mut grid = cfg.grid.map_or(GridSpec { min: dmin, max: dmax, count: dcount, node_scan: true }, |g| GridSpec {
        min: g.min,
        max: g.max,
        count: g.count,
        node_scan: g.node_scan,
    });
    if let Some((min, max, count)) = ov.grid {
        grid = GridSpec { min, max, count, node_scan: grid.node_scan };
    }
    if ov.no_node_scan {
        grid.node_scan = false;
    }
    if !(grid.min.is_finite() && grid.max.is_finite() && grid.min < grid.max) || grid.count < 2 {
        return invalid(format!("grid needs min < max and count >= 2, got {},{},{}", grid.min, grid.max, grid.count));
    }

    let mut tolerances = cfg.tolerances;
    for (k, v) in &ov.tols {
        tolerances.set(k, *v)?;
    }
    tolerances.validate()?;

    let band = ov.band.or(cfg.band).unwrap_or(GINOCCHIO_BAND);
    if !(0.0..1.0).contains(&band) {
        return invalid(format!("band must lie in [0, 1), got {band}"));
    }

    let (csv, json) = match &ov.out {
        Some(p) => (Some(p.clone()), Some(p.with_extension("json"))),
        None => {
            let csv = cfg.output.csv.clone();
            let json = cfg.output.json.clone().or_else(|| csv.as_ref().map(|c| c.with_extension("json")));
            (csv, json)
        }
    };

    Ok(Resolved {
        params,
        levels,
        order: ov.order.or(cfg.order).unwrap_or(2),
        method: ov.method.or(cfg.method).unwrap_or(Method::Both),
        grid,
        band,
        csv,
        json,
        tolerances,
        allow_unbound_flow: ov.allow_unbound_flow || cfg.allow_unbound_flow,
    })
}
