//! `key = value` settings files. Flags given on the command line win over
//! the file, which wins over built-in defaults.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::CliError;

/// Keys a settings file may set, named after the long flags.
pub const KEYS: &[&str] = &[
    "root",
    "scenario",
    "config",
    "approach",
    "trials",
    "seed",
    "timeout",
    "cases",
    "logs",
    "seqs",
    "patterns",
    "ranked",
    "min-support",
    "maxsize",
    "bk",
    "top",
    "feature",
    "report",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped. Unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Settings, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", i + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(format!("line {}: unknown key '{k}'", i + 1));
            }
            if v.is_empty() {
                return Err(format!("line {}: empty value for '{k}'", i + 1));
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(format!("line {}: '{k}' set twice", i + 1));
            }
        }
        Ok(Settings { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the file's, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.pick_opt(flag, key)?.unwrap_or(default))
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| {
                CliError::Usage(format!("settings file: bad value '{v}' for '{key}': {e}"))
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let s = Settings::parse("# desk run\ntrials = 5\n\nseed=9 # fixed\n").unwrap();
        assert_eq!(s.get("trials"), Some("5"));
        assert_eq!(s.pick(None, "seed", 0u64).unwrap(), 9);
        assert_eq!(s.pick(Some(3u64), "seed", 0).unwrap(), 3);
        assert_eq!(s.pick(None, "top", 20usize).unwrap(), 20);
        assert!(s.pick::<u64>(None, "trials", 0).is_ok());
        assert!(Settings::parse("colour = red")
            .unwrap_err()
            .contains("unknown key"));
        assert!(Settings::parse("trials").unwrap_err().contains("line 1"));
        assert!(Settings::parse("seed = 1\nseed = 2")
            .unwrap_err()
            .contains("twice"));
        assert!(Settings::parse("seed =").is_err());
        let bad = Settings::parse("trials = many").unwrap();
        assert!(matches!(
            bad.pick::<usize>(None, "trials", 1),
            Err(CliError::Usage(_))
        ));
    }
}
