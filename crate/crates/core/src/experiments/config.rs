//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Values are trimmed;
//! lists are comma separated.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse { line: i + 1, msg: format!("expected `key = value`, got `{line}`") });
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::Parse { line: i + 1, msg: "empty key".into() });
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Parse { line: i + 1, msg: format!("duplicate key `{key}`") });
            }
        }
        Ok(Config { values })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    /// Sets or replaces a value (command-line overrides).
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Fails on any key outside `known`.
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .map(String::as_str)
            .filter(|k| !known.contains(k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))))
        }
    }

    pub fn str(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.str(key)?;
        raw.parse()
            .map_err(|_| Error::Config(format!("cannot parse `{key}` = `{raw}`")))
    }

    /// Value of an optional key, `default` when absent.
    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        if self.contains(key) {
            self.get(key)
        } else {
            Ok(default)
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let raw = self.str(key)?;
        raw.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("cannot parse element `{}` of `{key}`", s.trim())))
            })
            .collect()
    }

    /// Positive finite float.
    pub fn positive(&self, key: &str) -> Result<f64> {
        let v: f64 = self.get(key)?;
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::Config(format!("`{key}` must be positive, got {v}")))
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        if !self.contains(key) {
            return Ok(default);
        }
        match self.str(key)? {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(Error::Config(format!("`{key}` must be a boolean, got `{other}`"))),
        }
    }
}
