//! Flat `section.key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key must be
//! known; [`RunConfig::canonical`] writes all keys in a fixed order so that
//! parsing the canonical text reproduces the same configuration.

use std::f64::consts::PI;
use std::fmt::Write as _;

use ringtime_core::limits::SweepPacket;
use ringtime_core::studies::{LimitTable, StudyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: StudyParams,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { params: StudyParams::default(), format: Format::Csv }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("{key}: invalid value {value:?} ({reason})")]
    Value { key: String, value: String, reason: String },
}

const KEYS: &[&str] = &[
    "basis.L",
    "basis.R",
    "basis.mass",
    "basis.hbar",
    "basis.grid",
    "basis.margin",
    "run.seed",
    "run.format",
    "tolerance.algebra",
    "tolerance.spectral",
    "spectrum.nu_min",
    "spectrum.nu_max",
    "limit.table",
    "limit.radii",
    "limit.momentum",
    "limit.x0",
    "limit.sigma_x",
    "limit.margin",
    "limit.levels",
    "limit.times",
    "uncertainty.states",
    "floquet.pulse_area",
    "floquet.drive_period",
    "floquet.periods",
    "floquet.steps",
];

fn value_err(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Value { key: key.into(), value: value.into(), reason: reason.into() }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| value_err(key, v, e.to_string()))
}

fn parse_float(key: &str, v: &str) -> Result<f64, ConfigError> {
    // `pi` multiples keep angle settings readable, e.g. `pi/2`.
    let x = match v {
        "pi" => PI,
        _ if v.starts_with("pi/") => PI / parse_num::<f64>(key, &v[3..])?,
        _ if v.ends_with("*pi") => parse_num::<f64>(key, &v[..v.len() - 3])? * PI,
        _ => parse_num(key, v)?,
    };
    if !x.is_finite() {
        return Err(value_err(key, v, "must be finite"));
    }
    Ok(x)
}

fn parse_list<T>(key: &str, v: &str, item: impl Fn(&str, &str) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    let items: Vec<&str> = v.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(value_err(key, v, "empty list entry"));
    }
    items.into_iter().map(|s| item(key, s)).collect()
}

fn positive(key: &str, v: &str, x: f64) -> Result<f64, ConfigError> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(value_err(key, v, "must be positive"))
    }
}

fn float_text(x: f64) -> String {
    format!("{x:?}")
}

fn list_text<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { line: line_no, text: raw.into() });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax { line: line_no, text: raw.into() });
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line: line_no, key: key.into() });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::Duplicate { line: line_no, key: key.into() });
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let p = &mut self.params;
        match key {
            "basis.L" => {
                p.cutoff = parse_num(key, v)?;
                if p.cutoff < 1 {
                    return Err(value_err(key, v, "cutoff must be at least 1"));
                }
            }
            "basis.R" => p.radius = positive(key, v, parse_float(key, v)?)?,
            "basis.mass" => p.mass = positive(key, v, parse_float(key, v)?)?,
            "basis.hbar" => p.hbar = positive(key, v, parse_float(key, v)?)?,
            "basis.grid" => {
                p.grid = match v {
                    "auto" => None,
                    _ => Some(parse_num(key, v)?),
                }
            }
            "basis.margin" => p.margin = parse_num(key, v)?,
            "run.seed" => p.seed = parse_num(key, v)?,
            "run.format" => self.format = Format::parse(v).ok_or_else(|| value_err(key, v, "expected csv or json"))?,
            "tolerance.algebra" => p.tol = positive(key, v, parse_float(key, v)?)?,
            "tolerance.spectral" => p.spectral_tol = positive(key, v, parse_float(key, v)?)?,
            "spectrum.nu_min" => p.nu_min = parse_num(key, v)?,
            "spectrum.nu_max" => p.nu_max = parse_num(key, v)?,
            "limit.table" => {
                p.limit_table =
                    LimitTable::parse(v).ok_or_else(|| value_err(key, v, "expected sweep, matter_wave or drift"))?
            }
            "limit.radii" => p.radii = parse_list(key, v, |k, s| positive(k, s, parse_float(k, s)?))?,
            "limit.momentum" => p.packet.momentum = parse_float(key, v)?,
            "limit.x0" => p.packet.x0 = parse_float(key, v)?,
            "limit.sigma_x" => p.packet.sigma_x = positive(key, v, parse_float(key, v)?)?,
            "limit.margin" => p.packet.margin = parse_num(key, v)?,
            "limit.levels" => p.matter_wave_levels = parse_list(key, v, parse_num)?,
            "limit.times" => p.drift_times = parse_list(key, v, parse_float)?,
            "uncertainty.states" => p.states = parse_num(key, v)?,
            "floquet.pulse_area" => p.pulse_area = positive(key, v, parse_float(key, v)?)?,
            "floquet.drive_period" => p.drive_period = positive(key, v, parse_float(key, v)?)?,
            "floquet.periods" => p.floquet_periods = parse_num(key, v)?,
            "floquet.steps" => p.floquet_steps = parse_num(key, v)?,
            _ => return Err(ConfigError::UnknownKey { line: 0, key: key.into() }),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let p = &self.params;
        let SweepPacket { momentum, x0, sigma_x, margin } = p.packet;
        Some(match key {
            "basis.L" => p.cutoff.to_string(),
            "basis.R" => float_text(p.radius),
            "basis.mass" => float_text(p.mass),
            "basis.hbar" => float_text(p.hbar),
            "basis.grid" => p.grid.map_or("auto".into(), |n| n.to_string()),
            "basis.margin" => p.margin.to_string(),
            "run.seed" => p.seed.to_string(),
            "run.format" => self.format.as_str().into(),
            "tolerance.algebra" => float_text(p.tol),
            "tolerance.spectral" => float_text(p.spectral_tol),
            "spectrum.nu_min" => p.nu_min.to_string(),
            "spectrum.nu_max" => p.nu_max.to_string(),
            "limit.table" => p.limit_table.as_str().into(),
            "limit.radii" => list_text(&p.radii, |x| float_text(*x)),
            "limit.momentum" => float_text(momentum),
            "limit.x0" => float_text(x0),
            "limit.sigma_x" => float_text(sigma_x),
            "limit.margin" => margin.to_string(),
            "limit.levels" => list_text(&p.matter_wave_levels, |l| l.to_string()),
            "limit.times" => list_text(&p.drift_times, |x| float_text(*x)),
            "uncertainty.states" => p.states.to_string(),
            "floquet.pulse_area" => float_text(p.pulse_area),
            "floquet.drive_period" => float_text(p.drive_period),
            "floquet.periods" => p.floquet_periods.to_string(),
            "floquet.steps" => p.floquet_steps.to_string(),
            _ => return None,
        })
    }

    /// Every key in a fixed order with round-trip exact values.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key).expect("every listed key has a value"));
        }
        out
    }
}
