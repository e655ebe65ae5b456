//! Flat key=value config files and flag/config/default layering.
//!
//! Precedence: command-line flag, then config-file entry, then the built-in
//! default. The reproducibility seed additionally falls back to the
//! `BURSTLAB_SEED` environment variable before its default.

use burstlab::{Error, Result};
use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

pub struct Layered {
    entries: HashMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl Layered {
    pub fn load(path: Option<&Path>) -> Result<Layered> {
        let mut entries = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    Error::Format(format!(
                        "{}:{}: expected key = value",
                        path.display(),
                        i + 1
                    ))
                })?;
                entries.insert(normalize(k), v.trim().to_string());
            }
        }
        Ok(Layered { entries })
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(&normalize(key)) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidParameter(format!("config value '{raw}' invalid for {key}"))
            }),
        }
    }

    /// Flag value if given, else config entry, else default.
    pub fn get<T: FromStr + Copy>(&self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn get_string(&self, key: &str, flag: Option<&str>, default: &str) -> String {
        if let Some(v) = flag {
            return v.to_string();
        }
        self.entries
            .get(&normalize(key))
            .cloned()
            .unwrap_or_else(|| default.to_string())
    }

    /// Seed resolution: flag, config, BURSTLAB_SEED, then 0.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = self.parsed::<u64>("seed")? {
            return Ok(s);
        }
        match std::env::var("BURSTLAB_SEED") {
            Ok(raw) => raw.parse::<u64>().map_err(|_| {
                Error::InvalidParameter(format!("BURSTLAB_SEED='{raw}' is not a valid seed"))
            }),
            Err(_) => Ok(0),
        }
    }
}
