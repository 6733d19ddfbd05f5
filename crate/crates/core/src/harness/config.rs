//! Sweep configuration: flat `key = value` files plus programmatic overrides.

use std::path::PathBuf;

use crate::bits::BitBlock;
use crate::codec::{SeparateFraming, System};
use crate::orbgrand::{PatternOrder, DEFAULT_MAX_QUERIES};
use crate::padding::PadRule;
use crate::Error;

/// Key used when none is configured: the FIPS-197 appendix C.1 key.
pub const DEFAULT_KEY_HEX: &str = "000102030405060708090a0b0c0d0e0f";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub systems: Vec<System>,
    pub payload_bits: usize,
    pub pad_rule: PadRule,
    pub ebn0_db: Vec<f64>,
    pub min_block_errors: u64,
    pub max_trials: u64,
    pub max_queries: u64,
    pub pattern_order: PatternOrder,
    pub seed: u64,
    pub rlc_seed: u64,
    pub key: [u8; 16],
    pub separate_framing: SeparateFraming,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            systems: System::ALL.to_vec(),
            payload_bits: 116,
            pad_rule: PadRule::Zeros,
            ebn0_db: vec![3.0, 4.0, 5.0, 6.0, 7.0],
            min_block_errors: 100,
            max_trials: 10_000_000,
            max_queries: DEFAULT_MAX_QUERIES,
            pattern_order: PatternOrder::Logistic,
            seed: 1,
            rlc_seed: 1,
            key: BitBlock::from_hex(DEFAULT_KEY_HEX).unwrap().to_bytes(),
            separate_framing: SeparateFraming::EqualRate,
            threads: 0,
            out: None,
        }
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error> {
    value
        .trim()
        .replace('_', "")
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

/// Comma-separated list of dB values; `inf` selects the noiseless channel.
pub fn parse_ebn0_list(value: &str) -> Result<Vec<f64>, Error> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let v: f64 = parse_number("ebn0_db_list", s)?;
            if v.is_nan() || v == f64::NEG_INFINITY {
                return Err(Error::Config(format!("ebn0_db_list: invalid value {s:?}")));
            }
            Ok(v)
        })
        .collect()
}

pub fn parse_systems(value: &str) -> Result<Vec<System>, Error> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

impl SweepConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let value = value.trim();
        match key.trim() {
            "system" | "systems" => self.systems = parse_systems(value)?,
            "payload_bits" | "k" => self.payload_bits = parse_number(key, value)?,
            "pad_rule" => self.pad_rule = value.parse()?,
            "ebn0_db_list" | "ebn0" => self.ebn0_db = parse_ebn0_list(value)?,
            "min_block_errors" => self.min_block_errors = parse_number(key, value)?,
            "max_trials" => self.max_trials = parse_number(key, value)?,
            "max_queries" => self.max_queries = parse_number(key, value)?,
            "pattern_order" => self.pattern_order = value.parse()?,
            "seed" => self.seed = parse_number(key, value)?,
            "rlc_seed" => self.rlc_seed = parse_number(key, value)?,
            "key" => {
                self.key = BitBlock::from_hex(value)
                    .map_err(|_| {
                        Error::Config(format!("key must be 32 hex characters, got {value:?}"))
                    })?
                    .to_bytes()
            }
            "separate_framing" => self.separate_framing = value.parse()?,
            "threads" => self.threads = parse_number(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key {other:?}"
                )))
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines on top of the defaults. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut config = SweepConfig::default();
        config.apply_text(text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), Error> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got {line:?}",
                    lineno + 1
                ))
            })?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.systems.is_empty() {
            return Err(Error::Config("no system selected".into()));
        }
        if self.payload_bits == 0 || self.payload_bits >= 128 {
            return Err(Error::Config(format!(
                "payload_bits must satisfy 1 <= k < 128, got {}",
                self.payload_bits
            )));
        }
        if self.ebn0_db.is_empty() {
            return Err(Error::Config("ebn0_db_list is empty".into()));
        }
        if self.min_block_errors < 1 {
            return Err(Error::Config("min_block_errors must be at least 1".into()));
        }
        if self.max_trials < self.min_block_errors {
            return Err(Error::Config(format!(
                "max_trials ({}) must be at least min_block_errors ({})",
                self.max_trials, self.min_block_errors
            )));
        }
        Ok(())
    }
}

/// Canned reproduction sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 12 padding bits (k = 116).
    Fig5,
    /// 8 padding bits (k = 120).
    Fig6,
    /// Baseline and proposed spot points: k = 116 at 5.5, 7.5 and 9 dB, k = 120
    /// at 7 dB.
    Discussion,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            "discussion" => Ok(Preset::Discussion),
            other => Err(Error::Config(format!("unknown preset {other:?}"))),
        }
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Discussion => "discussion",
        }
    }

    /// The sweeps this preset runs; the discussion preset covers two payload
    /// lengths and so yields two configurations.
    pub fn configs(self) -> Vec<SweepConfig> {
        let base = SweepConfig {
            out: Some(PathBuf::from(format!("{}.csv", self.name()))),
            ..SweepConfig::default()
        };
        match self {
            Preset::Fig5 => vec![SweepConfig {
                payload_bits: 116,
                ebn0_db: vec![2.0, 3.0, 4.0, 5.0, 5.5, 6.0, 7.0, 7.5, 8.0, 9.0],
                ..base
            }],
            Preset::Fig6 => vec![SweepConfig {
                payload_bits: 120,
                ebn0_db: vec![2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
                ..base
            }],
            Preset::Discussion => vec![
                SweepConfig {
                    systems: vec![System::Baseline, System::Proposed],
                    payload_bits: 116,
                    ebn0_db: vec![5.5, 7.5, 9.0],
                    ..base.clone()
                },
                SweepConfig {
                    systems: vec![System::Baseline, System::Proposed],
                    payload_bits: 120,
                    ebn0_db: vec![7.0],
                    ..base
                },
            ],
        }
    }
}
