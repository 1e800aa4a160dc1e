//! Experiment configuration: a flat `key = value` text format with `#`
//! comments, unknown keys rejected, and defaults matching the reference
//! parameter table (20 sensors per WBAN, 16 channels, a 16x20 rectangle,
//! 12 GTS slots, -10 dBm transmit power).

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::simcore::OffsetPolicy;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid value for {field}: {msg}")]
    Invalid { field: &'static str, msg: String },
}

/// Which scheme(s) a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Chim,
    Zigbee,
    Both,
}

/// One concrete scheme, as tagged in metrics rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunScheme {
    Chim,
    Zigbee,
}

impl RunScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunScheme::Chim => "chim",
            RunScheme::Zigbee => "zigbee",
        }
    }
}

impl fmt::Display for RunScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Scheme {
    pub fn runs(&self) -> &'static [RunScheme] {
        match self {
            Scheme::Chim => &[RunScheme::Chim],
            Scheme::Zigbee => &[RunScheme::Zigbee],
            Scheme::Both => &[RunScheme::Chim, RunScheme::Zigbee],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyMode {
    Probabilistic,
    Geometric,
}

/// A single traced job within a sweep, written out as a transmission log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceTarget {
    pub scheme: RunScheme,
    pub omega: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub omega_sweep: Vec<usize>,
    /// Sensors per WBAN (K).
    pub sensors: usize,
    /// Channels (M), the rectangle's row count.
    pub channels: usize,
    /// Guaranteed time-slots per baseline CFP (G).
    pub gts_slots: usize,
    /// Cross-WBAN in-range probability for the probabilistic topology.
    pub alpha: f64,
    pub topology: TopologyMode,
    /// Side of the square deployment area, geometric topology only.
    pub area_side_m: f64,
    /// Communication range, geometric topology only.
    pub range_m: f64,
    pub seeds: Vec<u64>,
    /// Superframes simulated per run.
    pub superframes: usize,
    pub inactive_slots: usize,
    pub slot_offsets: OffsetPolicy,
    pub slot_duration_ms: f64,
    pub tx_power_dbm: f64,
    pub output_dir: PathBuf,
    /// Monte-Carlo samples per `analyze` row.
    pub analysis_samples: u64,
    pub trace: Option<TraceTarget>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Both,
            omega_sweep: (1..=10).map(|i| i * 5).collect(),
            sensors: 20,
            channels: 16,
            gts_slots: 12,
            alpha: 0.05,
            topology: TopologyMode::Probabilistic,
            area_side_m: 10.0,
            range_m: 3.0,
            seeds: (1..=30).collect(),
            superframes: 200,
            inactive_slots: 0,
            slot_offsets: OffsetPolicy::Aligned,
            slot_duration_ms: 1.0,
            tx_power_dbm: -10.0,
            output_dir: PathBuf::from("out"),
            analysis_samples: 100_000,
            trace: None,
        }
    }
}

impl ExperimentConfig {
    /// Reads and validates a config file; an empty file yields the defaults.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses the flat `key = value` format and validates invariants.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("expected `key = value`, got `{content}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("empty value for `{key}`"),
                });
            }
            if seen.contains(&key) {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("duplicate key `{key}`"),
                });
            }
            cfg.apply(key, value, line)?;
            seen.push(key);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let bad = |msg: String| ConfigError::Parse { line, msg };
        match key {
            "scheme" => {
                self.scheme = match value {
                    "chim" => Scheme::Chim,
                    "zigbee" => Scheme::Zigbee,
                    "both" => Scheme::Both,
                    other => return Err(bad(format!("unknown scheme `{other}`"))),
                }
            }
            "omega" => self.omega_sweep = parse_list(value).map_err(bad)?,
            "sensors" => self.sensors = parse_num(value).map_err(bad)?,
            "channels" => self.channels = parse_num(value).map_err(bad)?,
            "gts_slots" => self.gts_slots = parse_num(value).map_err(bad)?,
            "alpha" => self.alpha = parse_num(value).map_err(bad)?,
            "topology" => {
                self.topology = match value {
                    "probabilistic" => TopologyMode::Probabilistic,
                    "geometric" => TopologyMode::Geometric,
                    other => return Err(bad(format!("unknown topology `{other}`"))),
                }
            }
            "area_side_m" => self.area_side_m = parse_num(value).map_err(bad)?,
            "range_m" => self.range_m = parse_num(value).map_err(bad)?,
            "seeds" => self.seeds = parse_list(value).map_err(bad)?,
            "superframes" => self.superframes = parse_num(value).map_err(bad)?,
            "inactive_slots" => self.inactive_slots = parse_num(value).map_err(bad)?,
            "slot_offsets" => {
                self.slot_offsets = match value {
                    "aligned" => OffsetPolicy::Aligned,
                    "random" => OffsetPolicy::Random,
                    other => return Err(bad(format!("unknown slot_offsets `{other}`"))),
                }
            }
            "slot_duration_ms" => self.slot_duration_ms = parse_num(value).map_err(bad)?,
            "tx_power_dbm" => self.tx_power_dbm = parse_num(value).map_err(bad)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "analysis_samples" => self.analysis_samples = parse_num(value).map_err(bad)?,
            "trace" => {
                let parts: Vec<&str> = value.split(':').collect();
                let [scheme, omega, seed] = parts[..] else {
                    return Err(bad(format!(
                        "trace must be `scheme:omega:seed`, got `{value}`"
                    )));
                };
                let scheme = match scheme {
                    "chim" => RunScheme::Chim,
                    "zigbee" => RunScheme::Zigbee,
                    other => return Err(bad(format!("unknown trace scheme `{other}`"))),
                };
                self.trace = Some(TraceTarget {
                    scheme,
                    omega: parse_num(omega).map_err(&bad)?,
                    seed: parse_num(seed).map_err(&bad)?,
                });
            }
            other => {
                return Err(bad(format!("unknown key `{other}`")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field: &'static str, msg: String| ConfigError::Invalid { field, msg };
        if self.sensors < 1 {
            return Err(invalid("sensors", "must be at least 1".into()));
        }
        if self.channels < 2 {
            return Err(invalid("channels", "must be at least 2".into()));
        }
        if self.superframes < 1 {
            return Err(invalid("superframes", "must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(invalid("seeds", "at least one seed required".into()));
        }
        if self.omega_sweep.is_empty() || self.omega_sweep.iter().any(|&n| n == 0) {
            return Err(invalid("omega", "sweep values must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid("alpha", format!("{} outside [0, 1]", self.alpha)));
        }
        if self.slot_duration_ms <= 0.0 {
            return Err(invalid("slot_duration_ms", "must be positive".into()));
        }
        if self.area_side_m <= 0.0 || self.range_m < 0.0 {
            return Err(invalid("area_side_m", "deployment geometry must be positive".into()));
        }
        if self.analysis_samples < 1 {
            return Err(invalid("analysis_samples", "must be at least 1".into()));
        }
        if let Some(t) = &self.trace {
            if !self.omega_sweep.contains(&t.omega) || !self.seeds.contains(&t.seed) {
                return Err(invalid(
                    "trace",
                    format!("({}, {}) is not part of the sweep", t.omega, t.seed),
                ));
            }
            if !self.scheme.runs().contains(&t.scheme) {
                return Err(invalid(
                    "trace",
                    format!("scheme {} is not part of the sweep", t.scheme),
                ));
            }
        }
        Ok(())
    }

    /// Construction order of the Latin family: smallest prime covering both
    /// dimensions.
    pub fn family_order(&self) -> usize {
        crate::latin::smallest_prime_at_least(self.channels.max(self.sensors))
    }

    pub fn energy_model(&self) -> crate::simcore::EnergyModel {
        crate::simcore::EnergyModel {
            tx_power_dbm: self.tx_power_dbm,
            slot_duration_ms: self.slot_duration_ms,
        }
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse `{value}`"))
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("cannot parse `{t}`")))
        .collect()
}
