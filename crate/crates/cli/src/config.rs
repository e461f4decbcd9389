//! Experiment configuration: a flat `key = value` text format (JSON accepted
//! as an alternative), resolved into an [`ExperimentConfig`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spinboson::hamiltonians::DeviationMode;
use spinboson::{ModelParams, RateOptions, RatePrefactor, Scheme};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spectrum,
    Deviations,
    Dynamics,
    Rates,
    Jeff,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spectrum => "spectrum",
            Mode::Deviations => "deviations",
            Mode::Dynamics => "dynamics",
            Mode::Rates => "rates",
            Mode::Jeff => "jeff",
        }
    }

    fn default_schemes(self) -> Vec<Scheme> {
        match self {
            Mode::Spectrum => vec![Scheme::Exact18, Scheme::Simple, Scheme::Dsr],
            Mode::Deviations => vec![Scheme::Simple, Scheme::Dsr],
            Mode::Dynamics | Mode::Rates | Mode::Jeff => vec![Scheme::Dsr],
        }
    }
}

impl FromStr for Mode {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        <Mode as clap::ValueEnum>::from_str(s, false)
            .map_err(|_| CliError::Config(format!("unknown mode '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Delta,
    /// Sweeps `Re g`; `Im g` stays at its configured value.
    G,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Delta => "delta",
            SweepVariable::G => "g",
        }
    }
}

/// `steps` equally spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        (0..self.steps)
            .map(|i| self.start + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// `samples` equally spaced times from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        (0..self.samples)
            .map(|i| self.start + span * i as f64 / (self.samples - 1) as f64)
            .collect()
    }
}

/// Grid for the Lorentzian effective density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JeffSpec {
    pub alpha: f64,
    pub omega_peak: f64,
    pub kappa: f64,
    pub omega_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub params: ModelParams,
    pub sweep: Option<Sweep>,
    pub schemes: Vec<Scheme>,
    pub times: TimeGrid,
    pub rates: RateOptions,
    pub deviation_mode: DeviationMode,
    pub jeff: Option<JeffSpec>,
    /// Label of the frequency unit; informational only.
    pub unit: String,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Keys accepted in the flat format.
const KEYS: &[&str] = &[
    "mode",
    "delta",
    "omega0",
    "g_re",
    "g_im",
    "kappa",
    "omega_c",
    "temperature",
    "sweep.variable",
    "sweep.start",
    "sweep.stop",
    "sweep.steps",
    "schemes",
    "times.start",
    "times.stop",
    "times.samples",
    "lamb_shift",
    "rate_prefactor",
    "pv_tol",
    "deviation_mode",
    "jeff.alpha",
    "jeff.omega_peak",
    "jeff.kappa",
    "jeff.omega_max",
    "jeff.points",
    "unit",
    "format",
    "out",
];

/// Ordered `key = value` pairs; later assignments override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues(BTreeMap<String, String>);

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = k.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Config(format!(
                    "line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            map.insert(key.to_string(), v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn merge(&mut self, other: KeyValues) {
        self.0.extend(other.0);
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn num<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("'{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    fn num_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.num(key)?.unwrap_or(default))
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("'{key}': expected a boolean, got '{v}'"))),
    }
}

pub fn parse_schemes(list: &str) -> Result<Vec<Scheme>, CliError> {
    let schemes = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Scheme::parse(s).ok_or_else(|| CliError::Config(format!("unknown scheme '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    if schemes.is_empty() {
        return Err(CliError::Config("scheme list is empty".into()));
    }
    Ok(schemes)
}

impl ExperimentConfig {
    /// Resolve a key-value set into a validated configuration.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self, CliError> {
        let mode: Mode = kv
            .get("mode")
            .ok_or_else(|| CliError::Config("missing 'mode'".into()))?
            .parse()?;
        let params = ModelParams {
            delta: kv.num_or("delta", 1.0)?,
            omega0: kv.num_or("omega0", 1.0)?,
            g: Complex64::new(kv.num_or("g_re", 0.0)?, kv.num_or("g_im", 0.0)?),
            kappa: kv.num_or("kappa", 0.0)?,
            omega_c: kv.num_or("omega_c", 10.0)?,
            temperature: kv.num_or("temperature", 0.0)?,
        };
        let sweep = match kv.get("sweep.variable") {
            None => {
                if ["sweep.start", "sweep.stop", "sweep.steps"]
                    .iter()
                    .any(|k| kv.get(k).is_some())
                {
                    return Err(CliError::Config("sweep bounds given without 'sweep.variable'".into()));
                }
                None
            }
            Some(var) => {
                let variable = match var {
                    "delta" => SweepVariable::Delta,
                    "g" => SweepVariable::G,
                    other => {
                        return Err(CliError::Config(format!(
                            "sweep.variable must be 'delta' or 'g', got '{other}'"
                        )))
                    }
                };
                let need = |k: &str| {
                    kv.get(k)
                        .ok_or_else(|| CliError::Config(format!("missing '{k}'")))
                        .map(|_| ())
                };
                need("sweep.start")?;
                need("sweep.stop")?;
                need("sweep.steps")?;
                Some(Sweep {
                    variable,
                    start: kv.num_or("sweep.start", 0.0)?,
                    stop: kv.num_or("sweep.stop", 0.0)?,
                    steps: kv.num_or("sweep.steps", 0)?,
                })
            }
        };
        let schemes = match kv.get("schemes") {
            Some(list) => parse_schemes(list)?,
            None => mode.default_schemes(),
        };
        let times = TimeGrid {
            start: kv.num_or("times.start", 0.0)?,
            stop: kv.num_or("times.stop", 200.0)?,
            samples: kv.num_or("times.samples", 4000)?,
        };
        let defaults = RateOptions::default();
        let rates = RateOptions {
            lamb_shift: match kv.get("lamb_shift") {
                Some(v) => parse_bool("lamb_shift", v)?,
                None => defaults.lamb_shift,
            },
            prefactor: match kv.get("rate_prefactor") {
                None | Some("consistent") => RatePrefactor::Consistent,
                Some("printed") => RatePrefactor::Printed,
                Some(other) => {
                    return Err(CliError::Config(format!(
                        "rate_prefactor must be 'consistent' or 'printed', got '{other}'"
                    )))
                }
            },
            pv_tol: kv.num_or("pv_tol", defaults.pv_tol)?,
            omega_cut: None,
        };
        let deviation_mode = match kv.get("deviation_mode") {
            None | Some("percent") => DeviationMode::Percent,
            Some("absolute") => DeviationMode::Absolute,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "deviation_mode must be 'percent' or 'absolute', got '{other}'"
                )))
            }
        };
        let jeff = match kv.get("jeff.alpha") {
            None => None,
            Some(_) => Some(JeffSpec {
                alpha: kv.num_or("jeff.alpha", 0.0)?,
                omega_peak: kv.num_or("jeff.omega_peak", params.omega0)?,
                kappa: kv.num_or("jeff.kappa", params.kappa)?,
                omega_max: kv.num_or("jeff.omega_max", 3.0 * params.omega0)?,
                points: kv.num_or("jeff.points", 301)?,
            }),
        };
        let format = match kv.get("format") {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => {
                return Err(CliError::Config(format!("format must be 'csv' or 'json', got '{other}'")))
            }
        };
        let config = Self {
            mode,
            params,
            sweep,
            schemes,
            times,
            rates,
            deviation_mode,
            jeff,
            unit: kv.get("unit").unwrap_or("omega0").to_string(),
            format,
            out: kv.get("out").map(PathBuf::from),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_key_values(&KeyValues::parse(text)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid JSON config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Read a config file; `.json` files (or text starting with `{`) are JSON.
    pub fn load(path: &Path) -> Result<KeyValues, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json")
            || text.trim_start().starts_with('{');
        if is_json {
            Ok(Self::from_json(&text)?.to_key_values())
        } else {
            KeyValues::parse(&text)
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(s) = &self.sweep {
            if s.steps < 2 {
                return Err(CliError::Config(format!("sweep.steps must be >= 2, got {}", s.steps)));
            }
            if !(s.start < s.stop) {
                return Err(CliError::Config(format!(
                    "sweep.start must be < sweep.stop, got {} and {}",
                    s.start, s.stop
                )));
            }
        }
        if self.schemes.is_empty() {
            return Err(CliError::Config("scheme list is empty".into()));
        }
        let mut seen = self.schemes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.schemes.len() {
            return Err(CliError::Config("scheme list contains duplicates".into()));
        }
        match self.mode {
            Mode::Deviations if self.schemes.contains(&Scheme::Exact18) => {
                return Err(CliError::Config(
                    "exact18 is the deviation reference and cannot be a compared scheme".into(),
                ))
            }
            Mode::Rates if self.schemes != [Scheme::Dsr] => {
                return Err(CliError::Config("rates mode supports only the dsr scheme".into()))
            }
            Mode::Dynamics => {
                if self.sweep.is_some() {
                    return Err(CliError::Config("dynamics mode does not take a sweep".into()));
                }
                let t = &self.times;
                if t.samples < 2 || !(t.start >= 0.0) || !(t.start < t.stop) {
                    return Err(CliError::Config(
                        "times need samples >= 2 and 0 <= start < stop".into(),
                    ));
                }
            }
            Mode::Jeff => {
                let j = self
                    .jeff
                    .ok_or_else(|| CliError::Config("jeff mode needs 'jeff.alpha'".into()))?;
                if j.points < 2 || !(j.omega_max > 0.0) || !(j.omega_peak > 0.0) || j.kappa < 0.0 {
                    return Err(CliError::Config(
                        "jeff needs points >= 2, omega_max > 0, omega_peak > 0, kappa >= 0".into(),
                    ));
                }
            }
            _ => {}
        }
        if !(self.rates.pv_tol > 0.0) {
            return Err(CliError::Config("pv_tol must be > 0".into()));
        }
        Ok(())
    }

    /// Flat key-value form; `parse(serialize(c)) == c`.
    pub fn to_key_values(&self) -> KeyValues {
        let mut kv = KeyValues::default();
        let p = &self.params;
        kv.set("mode", self.mode.name());
        kv.set("delta", p.delta.to_string());
        kv.set("omega0", p.omega0.to_string());
        kv.set("g_re", p.g.re.to_string());
        kv.set("g_im", p.g.im.to_string());
        kv.set("kappa", p.kappa.to_string());
        kv.set("omega_c", p.omega_c.to_string());
        kv.set("temperature", p.temperature.to_string());
        if let Some(s) = &self.sweep {
            kv.set("sweep.variable", s.variable.name());
            kv.set("sweep.start", s.start.to_string());
            kv.set("sweep.stop", s.stop.to_string());
            kv.set("sweep.steps", s.steps.to_string());
        }
        kv.set(
            "schemes",
            self.schemes.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
        );
        kv.set("times.start", self.times.start.to_string());
        kv.set("times.stop", self.times.stop.to_string());
        kv.set("times.samples", self.times.samples.to_string());
        kv.set("lamb_shift", self.rates.lamb_shift.to_string());
        kv.set(
            "rate_prefactor",
            match self.rates.prefactor {
                RatePrefactor::Consistent => "consistent",
                RatePrefactor::Printed => "printed",
            },
        );
        kv.set("pv_tol", self.rates.pv_tol.to_string());
        kv.set(
            "deviation_mode",
            match self.deviation_mode {
                DeviationMode::Percent => "percent",
                DeviationMode::Absolute => "absolute",
            },
        );
        if let Some(j) = &self.jeff {
            kv.set("jeff.alpha", j.alpha.to_string());
            kv.set("jeff.omega_peak", j.omega_peak.to_string());
            kv.set("jeff.kappa", j.kappa.to_string());
            kv.set("jeff.omega_max", j.omega_max.to_string());
            kv.set("jeff.points", j.points.to_string());
        }
        kv.set("unit", self.unit.clone());
        kv.set("format", self.format.name());
        if let Some(out) = &self.out {
            kv.set("out", out.display().to_string());
        }
        kv
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.to_key_values().0 {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

impl KeyValues {
    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.0.iter()
    }
}
