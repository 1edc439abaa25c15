//! Line-oriented `key = value` configuration.
//!
//! ```text
//! # Kalaallisut
//! language_tag = kl
//! base_layout = qwerty
//! min_count = 2
//! variant = nordic
//! variant_keyboard = danish
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! errors. An empty value resets an optional field.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::emit::EmitConfig;
use crate::synthesis::SynthesisConfig;
use crate::unicode_base::{BaseResolver, FallbackTable, TableError};

pub const KEYS: [&str; 13] = [
    "language_tag",
    "base_layout",
    "min_count",
    "special_letter_threshold",
    "currency_symbol",
    "punctuation_limit",
    "long_press_warn",
    "ime_name",
    "variant",
    "variant_keyboard",
    "ascii_capable",
    "auto_capital",
    "fallback_table",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<ConfigError>,
    },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: &'static str,
    },
    #[error("fallback table {}: {source}", path.display())]
    Table {
        path: PathBuf,
        #[source]
        source: TableError,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub synthesis: SynthesisConfig,
    pub emit: EmitConfig,
    /// Extra `char<TAB>base` rows layered over the shipped fallback table.
    pub fallback_table: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| ConfigError::AtLine {
                    line: i + 1,
                    source: Box::new(e),
                })?;
        }
        Ok(config)
    }

    /// Reads a config file. A relative `fallback_table` is resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut config = Config::parse(&text)?;
        if let (Some(table), Some(dir)) = (&config.fallback_table, path.parent()) {
            if table.is_relative() {
                config.fallback_table = Some(dir.join(table));
            }
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let s = &mut self.synthesis;
        let e = &mut self.emit;
        match key {
            "language_tag" => s.language_tag = non_empty(key, value)?.to_owned(),
            "base_layout" => s.base_layout = optional(value),
            "min_count" => {
                s.min_count = parse_num(key, value)?;
                if s.min_count == 0 {
                    return Err(invalid(key, value, "must be at least 1"));
                }
            }
            "special_letter_threshold" => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| invalid(key, value, "expected a number"))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(invalid(key, value, "must be between 0 and 1"));
                }
                s.special_letter_threshold = v;
            }
            "currency_symbol" => {
                let mut chars = value.chars();
                s.currency_symbol = match (chars.next(), chars.next()) {
                    (None, _) => None,
                    (Some(c), None) => Some(c),
                    _ => return Err(invalid(key, value, "expected a single character")),
                };
            }
            "punctuation_limit" => s.punctuation_limit = parse_num(key, value)?,
            "long_press_warn" => s.long_press_warn = parse_num(key, value)?,
            "ime_name" => e.ime_name = optional(value),
            "variant" => e.variant = optional(value),
            "variant_keyboard" => e.variant_keyboard = optional(value),
            "ascii_capable" => e.ascii_capable = parse_bool(key, value)?,
            "auto_capital" => e.auto_capital = parse_bool(key, value)?,
            "fallback_table" => self.fallback_table = optional(value).map(PathBuf::from),
            _ => return Err(ConfigError::UnknownKey(key.to_owned())),
        }
        Ok(())
    }

    /// Resolver over the shipped table plus any configured overrides.
    pub fn resolver(&self) -> Result<BaseResolver, ConfigError> {
        let Some(path) = &self.fallback_table else {
            return Ok(BaseResolver::default());
        };
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.clone(),
            source,
        })?;
        let overrides = FallbackTable::parse(&text).map_err(|source| ConfigError::Table {
            path: path.clone(),
            source,
        })?;
        Ok(BaseResolver::new(
            FallbackTable::builtin().with_overrides(&overrides),
        ))
    }
}

fn invalid(key: &str, value: &str, reason: &'static str) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_owned(),
        value: value.to_owned(),
        reason,
    }
}

fn optional(value: &str) -> Option<String> {
    (!value.is_empty()).then(|| value.to_owned())
}

fn non_empty<'a>(key: &str, value: &'a str) -> Result<&'a str, ConfigError> {
    if value.is_empty() {
        Err(invalid(key, value, "must not be empty"))
    } else {
        Ok(value)
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| invalid(key, value, "expected a non-negative integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}
