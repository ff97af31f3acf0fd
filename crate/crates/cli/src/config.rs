//! Flat `key = value` run configuration.
//!
//! ```text
//! # cigar residuals
//! command = verify
//! family = cigar
//! interval = [0.1, 5]
//! grid_points = 200
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Command-line flags
//! are merged on top of the file before validation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use warpsol::families::FAMILY_NAMES;

/// Configuration problem tied to one key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Unvalidated key-value pairs.
pub type RawConfig = BTreeMap<String, String>;

/// Parses the text format. Repeated keys are rejected.
pub fn parse_config(text: &str) -> Result<RawConfig, ConfigError> {
    let mut out = RawConfig::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = parse_assignment(line)
            .map_err(|e| ConfigError::new(e.key, format!("line {}: {}", i + 1, e.message)))?;
        if out.contains_key(&key) {
            return Err(ConfigError::new(key, format!("line {}: repeated key", i + 1)));
        }
        out.insert(key, value);
    }
    Ok(out)
}

/// Splits `key=value` at the first `=`.
pub fn parse_assignment(s: &str) -> Result<(String, String), ConfigError> {
    let Some((key, value)) = s.split_once('=') else {
        return Err(ConfigError::new(s.trim(), "expected `key = value`"));
    };
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::new("", format!("missing key in `{s}`")));
    }
    Ok((key.to_string(), value.trim().to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Synthesize,
    ClassifyRb,
    Sample,
    Series,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Synthesize => "synthesize",
            Command::ClassifyRb => "classify-rb",
            Command::Sample => "sample",
            Command::Series => "series",
        }
    }

    /// Keys accepted besides `command`, `output` and `formats`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Verify => &[
                "family", "interval", "grid_points", "n", "lambda_star", "B", "C", "D", "E",
                "gamma", "c", "tol",
            ],
            Command::Synthesize => &[
                "family", "profile", "profile_d1", "profile_d2", "domain", "fd_step", "interval", "grid_points", "n", "a",
                "b", "lambda_star", "C", "D", "t0", "abs_tol", "rel_tol", "tol",
            ],
            Command::ClassifyRb => &["family", "interval", "grid_points", "n", "B", "C", "D", "E"],
            Command::Sample => &[
                "family", "interval", "grid_points", "n", "lambda_star", "B", "C", "D", "E",
            ],
            Command::Series => &["n", "c", "lambda_star", "a0", "a1", "b0", "b1", "order"],
        }
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        [
            Command::Verify,
            Command::Synthesize,
            Command::ClassifyRb,
            Command::Sample,
            Command::Series,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| {
            ConfigError::new(
                "command",
                format!("unknown command `{s}` (verify, synthesize, classify-rb, sample, series)"),
            )
        })
    }
}

const NUMERIC_KEYS: [&str; 20] = [
    "n", "a", "b", "lambda_star", "B", "C", "D", "E", "gamma", "c", "tol", "abs_tol", "rel_tol",
    "t0", "fd_step", "a0", "a1", "b0", "b1", "order",
];

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Catalog name or `custom`.
    pub family: Option<String>,
    /// Numeric parameters by key.
    pub params: BTreeMap<String, f64>,
    /// Expression in `t` for `h′` of a custom profile.
    pub profile: Option<String>,
    /// Optional exact `h″` and `h‴` expressions.
    pub profile_d1: Option<String>,
    pub profile_d2: Option<String>,
    pub domain: Option<(f64, f64)>,
    pub interval: Option<(f64, f64)>,
    pub grid_points: usize,
    pub output: String,
    pub csv: bool,
    pub json: bool,
}

pub const DEFAULT_GRID_POINTS: usize = 200;

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let command: Command = raw
            .get("command")
            .ok_or_else(|| ConfigError::new("command", "missing"))?
            .parse()?;
        for key in raw.keys() {
            let common = matches!(key.as_str(), "command" | "output" | "formats");
            if common || command.keys().contains(&key.as_str()) {
                continue;
            }
            let known = NUMERIC_KEYS.contains(&key.as_str())
                || Command::Synthesize.keys().contains(&key.as_str());
            let message = if known {
                format!("not used by `{}`", command.name())
            } else {
                "unknown key".to_string()
            };
            return Err(ConfigError::new(key.as_str(), message));
        }

        let mut params = BTreeMap::new();
        for key in NUMERIC_KEYS {
            if let Some(v) = raw.get(key) {
                params.insert(key.to_string(), parse_real(key, v)?);
            }
        }

        let family = raw.get("family").cloned();
        if let Some(name) = &family {
            let custom_ok = command == Command::Synthesize && name == "custom";
            if !custom_ok && !FAMILY_NAMES.contains(&name.as_str()) {
                return Err(ConfigError::new("family", format!("unknown family `{name}`")));
            }
        }

        let grid_points = match raw.get("grid_points") {
            Some(v) => parse_count("grid_points", v)?,
            None => DEFAULT_GRID_POINTS,
        };
        if grid_points < 2 {
            return Err(ConfigError::new("grid_points", "need at least 2 points"));
        }

        let interval = raw.get("interval").map(|v| parse_interval("interval", v)).transpose()?;
        let domain = raw.get("domain").map(|v| parse_interval("domain", v)).transpose()?;

        let (mut csv, mut json) = (true, true);
        if let Some(v) = raw.get("formats") {
            (csv, json) = (false, false);
            for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match item {
                    "csv" => csv = true,
                    "json" => json = true,
                    other => {
                        return Err(ConfigError::new("formats", format!("unknown format `{other}`")))
                    }
                }
            }
        }

        Ok(Self {
            command,
            family,
            params,
            profile: raw.get("profile").cloned(),
            profile_d1: raw.get("profile_d1").cloned(),
            profile_d2: raw.get("profile_d2").cloned(),
            domain,
            interval,
            grid_points,
            output: raw
                .get("output")
                .cloned()
                .unwrap_or_else(|| command.name().to_string()),
            csv,
            json,
        })
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn real_or(&self, key: &str, default: f64) -> f64 {
        self.real(key).unwrap_or(default)
    }

    /// Non-negative integer parameter.
    pub fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.real(key) {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(Some(v as usize)),
            Some(v) => Err(ConfigError::new(key, format!("expected a non-negative integer, got {v}"))),
        }
    }
}

fn parse_real(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| ConfigError::new(key, format!("expected a number, got `{v}`")))?;
    if !x.is_finite() {
        return Err(ConfigError::new(key, format!("expected a finite number, got `{v}`")));
    }
    Ok(x)
}

fn parse_count(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError::new(key, format!("expected a non-negative integer, got `{v}`")))
}

/// Accepts `[lo, hi]` or `lo, hi`; infinite bounds as `inf`/`-inf`.
fn parse_interval(key: &str, v: &str) -> Result<(f64, f64), ConfigError> {
    let inner = v.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(ConfigError::new(key, format!("expected `[lo, hi]`, got `{v}`")));
    };
    let bound = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|x| !x.is_nan())
            .ok_or_else(|| ConfigError::new(key, format!("bad bound `{s}`")))
    };
    let (lo, hi) = (bound(lo)?, bound(hi)?);
    if lo >= hi {
        return Err(ConfigError::new(key, format!("need lo < hi, got [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> RawConfig {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn parses_file_format() {
        let text = "# comment\ncommand = verify\n\nfamily=cigar\ninterval = [0.1, 5]\n";
        let r = parse_config(text).unwrap();
        assert_eq!(r["family"], "cigar");
        let cfg = RunConfig::from_raw(&r).unwrap();
        assert_eq!(cfg.command, Command::Verify);
        assert_eq!(cfg.interval, Some((0.1, 5.0)));
        assert_eq!(cfg.grid_points, DEFAULT_GRID_POINTS);
        assert!(cfg.csv && cfg.json);
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_config("command = verify\ncommand = sample").unwrap_err();
        assert_eq!(e.key, "command");
        let e = RunConfig::from_raw(&raw(&[("command", "verify"), ("widht", "3")])).unwrap_err();
        assert_eq!((e.key.as_str(), e.message.as_str()), ("widht", "unknown key"));
        let e = RunConfig::from_raw(&raw(&[("command", "series"), ("family", "cigar")])).unwrap_err();
        assert_eq!(e.key, "family");
        assert!(e.message.contains("not used"));
        let e = RunConfig::from_raw(&raw(&[("command", "verify"), ("n", "three")])).unwrap_err();
        assert_eq!(e.key, "n");
        let e = RunConfig::from_raw(&raw(&[("command", "sample"), ("interval", "[2, 1]")])).unwrap_err();
        assert_eq!(e.key, "interval");
        let e = RunConfig::from_raw(&raw(&[("command", "verify"), ("family", "helicoid")])).unwrap_err();
        assert_eq!(e.key, "family");
        let e = RunConfig::from_raw(&raw(&[("command", "sample"), ("grid_points", "1")])).unwrap_err();
        assert_eq!(e.key, "grid_points");
    }

    #[test]
    fn integer_parameters() {
        let cfg = RunConfig::from_raw(&raw(&[("command", "series"), ("order", "2.5")])).unwrap();
        assert_eq!(cfg.count("order").unwrap_err().key, "order");
        let cfg = RunConfig::from_raw(&raw(&[("command", "series"), ("order", "12")])).unwrap();
        assert_eq!(cfg.count("order").unwrap(), Some(12));
    }

    #[test]
    fn formats_subset() {
        let cfg = RunConfig::from_raw(&raw(&[("command", "sample"), ("formats", "json")])).unwrap();
        assert!(!cfg.csv && cfg.json);
        assert!(RunConfig::from_raw(&raw(&[("command", "sample"), ("formats", "xml")])).is_err());
    }
}
