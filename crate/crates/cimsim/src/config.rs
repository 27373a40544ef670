//! Parameter files merged underneath explicit command-line flags.
//!
//! A config is either a flat JSON object or `key = value` lines (`#` comments).
//! Keys use the long flag names; `_` and `-` are interchangeable.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl Config {
    pub fn parse(text: &str, source: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        if text.trim_start().starts_with('{') {
            let obj: serde_json::Map<String, serde_json::Value> =
                serde_json::from_str(text).map_err(|e| CliError::input(format!("{source}: {e}")))?;
            for (k, v) in obj {
                let s = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|i| match i {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                        .collect::<Vec<_>>()
                        .join(","),
                    serde_json::Value::Object(_) | serde_json::Value::Null => {
                        return Err(CliError::input(format!("{source}: value of {k:?} must be a scalar or list")))
                    }
                    other => other.to_string(),
                };
                values.insert(normalize(&k), s);
            }
        } else {
            for (k, line) in text.lines().enumerate() {
                let body = line.split('#').next().unwrap_or("").trim();
                if body.is_empty() {
                    continue;
                }
                let (key, value) = body.split_once('=').ok_or_else(|| CliError::Parse {
                    path: source.into(),
                    line: k + 1,
                    message: "expected key = value".into(),
                })?;
                values.insert(normalize(key), value.trim().to_string());
            }
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::parse(&crate::formats::read_file(path)?, &path.display().to_string())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(&normalize(key)) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::input(format!("config value {raw:?} for {key} is not valid"))),
        }
    }

    /// The flag if given, else the config entry.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// Like [`Config::pick`] with a fallback default.
    pub fn pick_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }
}
