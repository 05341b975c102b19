//! Flat `key=value` run configuration. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::Failure;

const KEYS: &[&str] = &[
    "order", "form", "format", "max-order", "family", "H", "t", "maxM", "string", "geometry", "lambda", "testfn",
    "seed", "suite", "tol", "draws", "draws-n4", "qmc-points", "paths", "grid", "specs", "bell-order", "threads",
];

/// Values read from a config file; lookups fall back to command defaults.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Failure::Validation(format!("config line {}: expected key=value", i + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Failure::Validation(format!("config line {}: unknown key `{k}`", i + 1)));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::Validation(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Failure> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::Validation(format!("config value `{v}` is not valid for `{key}`"))),
        }
    }

    /// Flag value, else config value, else `None`.
    pub fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, Failure> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let cfg = RunConfig::parse("# comment\norder = 3\nlambda=0.5\n").unwrap();
        assert_eq!(cfg.pick(None, "order", 0u32).unwrap(), 3);
        assert_eq!(cfg.pick(Some(1u32), "order", 0).unwrap(), 1);
        assert_eq!(cfg.pick(None, "seed", 9u64).unwrap(), 9);
        assert!(cfg.get::<u32>("lambda").is_err());
        assert!(RunConfig::parse("bogus=1").is_err());
        assert!(RunConfig::parse("order").is_err());
    }
}
