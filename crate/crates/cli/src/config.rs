//! Flat `key=value` config files and flag/default resolution.
//!
//! Every long flag of every subcommand can also be supplied from a file
//! passed with `--config`. Resolution order is: explicit flag, then
//! config file, then the built-in default. Files use one `key=value`
//! pair per line; `#` starts a comment; later duplicates win; keys that
//! no subcommand understands are rejected rather than ignored, so typos
//! fail loudly.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Every key any subcommand may read. Kept as one universe so a shared
/// file can drive several subcommands without tripping the unknown-key
/// check on entries the current one ignores.
const KNOWN_KEYS: [&str; 20] = [
    "cells",
    "alpha",
    "beta",
    "gamma",
    "eta",
    "q",
    "dt",
    "tol",
    "max-steps",
    "damping",
    "seed",
    "trials",
    "init",
    "out",
    "summary",
    "trajectory",
    "snapshot-every",
    "out-dir",
    "etas",
    "qs",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: HashMap<String, String>,
}

impl ConfigFile {
    /// Load a config file, or an empty table when no path was given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Invalid(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Invalid(format!(
                    "{}:{}: expected key=value, got `{line}`",
                    path.display(),
                    idx + 1
                )));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Invalid(format!(
                    "{}:{}: unknown config key `{key}`",
                    path.display(),
                    idx + 1
                )));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Typed lookup; a present-but-unparsable value is an error naming
    /// the key, not a silent fallback.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                CliError::Invalid(format!("config key `{key}`: cannot parse `{raw}`: {e}"))
            }),
        }
    }
}

/// Flag beats config beats default.
pub fn resolve<T: FromStr + Clone>(
    flag: &Option<T>,
    config: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: Display,
{
    if let Some(v) = flag {
        return Ok(v.clone());
    }
    Ok(config.get::<T>(key)?.unwrap_or(default))
}

/// Like [`resolve`] but with no default: absent everywhere stays `None`.
pub fn resolve_opt<T: FromStr + Clone>(
    flag: &Option<T>,
    config: &ConfigFile,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: Display,
{
    if flag.is_some() {
        return Ok(flag.clone());
    }
    config.get::<T>(key)
}

/// Comma-separated float list, e.g. `0.1,0.01,0.007`.
pub fn parse_float_list(raw: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for piece in raw.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(CliError::Invalid(format!(
                "{what}: empty entry in list `{raw}`"
            )));
        }
        out.push(
            piece
                .parse::<f64>()
                .map_err(|e| CliError::Invalid(format!("{what}: cannot parse `{piece}`: {e}")))?,
        );
    }
    if out.is_empty() {
        return Err(CliError::Invalid(format!("{what}: list is empty")));
    }
    Ok(out)
}
