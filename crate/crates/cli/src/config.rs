//! Layered parameter lookup: command-line flag, then config file, then default.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::CliError;

/// Flat key/value settings read from a config file.
///
/// Two formats are accepted: `key = value` lines (`#` starts a comment) or
/// a flat JSON object. Keys are the long flag names; `_` and `-` are
/// interchangeable and matching is case-insensitive. Keys a command does
/// not use are ignored, so one file can serve several commands.
#[derive(Debug, Default)]
pub struct Resolver {
    values: BTreeMap<String, String>,
    echo: RefCell<Vec<(String, String)>>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl Resolver {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let values = if text.trim_start().starts_with('{') {
            parse_json(text)?
        } else {
            parse_lines(text)?
        };
        Ok(Self {
            values,
            echo: RefCell::new(Vec::new()),
        })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }

    fn record(&self, key: &str, value: impl Display) {
        self.echo
            .borrow_mut()
            .push((key.to_string(), value.to_string()));
    }

    /// Flag value, else config value, else `default`; the result is echoed.
    pub fn get<T: FromStr + Display>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        let v = match flag {
            Some(v) => v,
            None => self.lookup(key)?.unwrap_or(default),
        };
        self.record(key, &v);
        Ok(v)
    }

    /// Like [`Resolver::get`] without a default.
    pub fn get_opt<T: FromStr + Display>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        let v = match flag {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        if let Some(x) = &v {
            self.record(key, x);
        }
        Ok(v)
    }

    /// Boolean switch: set by the flag or by a `true` config value.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        let v = flag || self.lookup::<bool>(key)?.unwrap_or(false);
        self.record(key, v);
        Ok(v)
    }

    pub fn get_enum<T: ValueEnum + Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        let v = match flag {
            Some(v) => v,
            None => match self.values.get(key) {
                Some(raw) => T::from_str(raw, true).map_err(|_| {
                    CliError::Usage(format!("config key `{key}`: unknown value `{raw}`"))
                })?,
                None => default,
            },
        };
        let name = v
            .to_possible_value()
            .map(|p| p.get_name().to_string())
            .unwrap_or_default();
        self.record(key, name);
        Ok(v)
    }

    /// Comma-separated list of numbers.
    pub fn get_list(
        &self,
        flag: Option<Vec<f64>>,
        key: &str,
        default: &[f64],
    ) -> Result<Vec<f64>, CliError> {
        let v = match flag {
            Some(v) => v,
            None => match self.values.get(key) {
                Some(raw) => parse_list(raw).ok_or_else(|| {
                    CliError::Usage(format!("config key `{key}`: bad list `{raw}`"))
                })?,
                None => default.to_vec(),
            },
        };
        let joined: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        self.record(key, joined.join(","));
        Ok(v)
    }

    /// Every resolved parameter in lookup order.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.echo.borrow().clone()
    }
}

fn parse_list(raw: &str) -> Option<Vec<f64>> {
    raw.split(',').map(|s| s.trim().parse().ok()).collect()
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        out.insert(normalize(k), v.trim().to_string());
    }
    Ok(out)
}

fn parse_json(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let obj: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config JSON: {e}")))?;
    let mut out = BTreeMap::new();
    for (k, v) in obj {
        let s = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Bool(b) => b.to_string(),
            serde_json::Value::Array(items) => {
                let parts: Option<Vec<String>> = items
                    .iter()
                    .map(|x| x.as_f64().map(|f| f.to_string()))
                    .collect();
                parts
                    .ok_or_else(|| {
                        CliError::Usage(format!("config key `{k}`: arrays must hold numbers"))
                    })?
                    .join(",")
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "config key `{k}`: nested values are not supported"
                )))
            }
        };
        out.insert(normalize(&k), s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_config_beats_default() {
        let r = Resolver::parse("alpha = 0.3\n# comment\ner=2").unwrap();
        assert_eq!(r.get(Some(0.9), "alpha", 0.5).unwrap(), 0.9);
        assert_eq!(r.get(None, "alpha", 0.5).unwrap(), 0.3);
        assert_eq!(r.get(None, "dt", 1e-3).unwrap(), 1e-3);
        assert_eq!(r.get::<f64>(None, "er", 1.0).unwrap(), 2.0);
    }

    #[test]
    fn json_config_is_flattened() {
        let r =
            Resolver::parse(r#"{"t_ramp": 2.5, "alphas": [0.3, 0.5], "linear": true}"#).unwrap();
        assert_eq!(r.get(None, "t-ramp", 1.0).unwrap(), 2.5);
        assert_eq!(r.get_list(None, "alphas", &[]).unwrap(), vec![0.3, 0.5]);
        assert!(r.switch(false, "linear").unwrap());
    }

    #[test]
    fn malformed_config_is_a_usage_error() {
        assert!(matches!(
            Resolver::parse("alpha 0.3"),
            Err(CliError::Usage(_))
        ));
        let r = Resolver::parse("alpha = x").unwrap();
        assert!(matches!(r.get(None, "alpha", 0.5), Err(CliError::Usage(_))));
    }
}
