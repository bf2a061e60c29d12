//! `key = value` configuration, one entry per line, `#` starts a comment.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::arith::DEFAULT_FACTOR_BUDGET;
use crate::cubic::{reference_sextic_cubic, ConditionVReading, MonicCubic};
use crate::localsolve::DEFAULT_DEPTH_CAP;
use crate::{Error, Result};

pub const DEFAULT_HEIGHT_BOUND: u64 = 10_000;
pub const DEFAULT_PRIME_BOUND: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown output format `{s}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub depth_cap: u32,
    pub height_bound: u64,
    pub prime_bound: u64,
    pub factor_budget: u64,
    pub cache_path: Option<PathBuf>,
    /// `None` leaves the sextic comparison undecided.
    pub reference_sextic_cubic: Option<MonicCubic>,
    pub output_format: OutputFormat,
    /// `None` uses every available core.
    pub thread_count: Option<usize>,
    pub condition_v_reading: ConditionVReading,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            depth_cap: DEFAULT_DEPTH_CAP,
            height_bound: DEFAULT_HEIGHT_BOUND,
            prime_bound: DEFAULT_PRIME_BOUND,
            factor_budget: DEFAULT_FACTOR_BUDGET,
            cache_path: None,
            reference_sextic_cubic: Some(reference_sextic_cubic()),
            output_format: OutputFormat::Text,
            thread_count: None,
            condition_v_reading: ConditionVReading::Both,
        }
    }
}

fn positive<T: FromStr + PartialOrd + Default>(key: &str, value: &str) -> Result<T> {
    match value.parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(Error::Parse(format!(
            "`{key}` must be a positive integer, got `{value}`"
        ))),
    }
}

impl Config {
    pub const KEYS: [&'static str; 9] = [
        "depth_cap",
        "height_bound",
        "prime_bound",
        "factor_budget",
        "cache_path",
        "reference_sextic_cubic",
        "output_format",
        "thread_count",
        "condition_v_reading",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "depth_cap" => self.depth_cap = positive(key, value)?,
            "height_bound" => self.height_bound = positive(key, value)?,
            "prime_bound" => self.prime_bound = positive(key, value)?,
            "factor_budget" => self.factor_budget = positive(key, value)?,
            "cache_path" => self.cache_path = (!value.is_empty()).then(|| PathBuf::from(value)),
            "reference_sextic_cubic" => {
                self.reference_sextic_cubic = match value {
                    "" | "none" => None,
                    v => Some(v.parse()?),
                }
            }
            "output_format" => self.output_format = value.parse()?,
            "thread_count" => self.thread_count = Some(positive(key, value)?),
            "condition_v_reading" => self.condition_v_reading = value.parse()?,
            _ => return Err(Error::Parse(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut config = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", n + 1)))?;
            config
                .set(key.trim(), value)
                .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::default();
        assert_eq!(c.height_bound, 10_000);
        assert_eq!(c.prime_bound, 10_000);
        assert_eq!(c.reference_sextic_cubic, Some(MonicCubic::depressed(-5, 5)));
        assert_eq!(c.condition_v_reading, ConditionVReading::Both);
    }

    #[test]
    fn parse_file() {
        let text = "# comment\n depth_cap = 12\nheight_bound=50 # trailing\nreference_sextic_cubic = none\n\
                    output_format = json\ncondition_v_reading = raw\ncache_path = /tmp/f.cache\n";
        let c: Config = text.parse().unwrap();
        assert_eq!(c.depth_cap, 12);
        assert_eq!(c.height_bound, 50);
        assert_eq!(c.reference_sextic_cubic, None);
        assert_eq!(c.output_format, OutputFormat::Json);
        assert_eq!(c.condition_v_reading, ConditionVReading::Raw);
        assert_eq!(c.cache_path, Some(PathBuf::from("/tmp/f.cache")));
    }

    #[test]
    fn rejects_bad_entries() {
        assert!("depth_cap = 0".parse::<Config>().is_err());
        assert!("height_bound = -3".parse::<Config>().is_err());
        assert!("colour = blue".parse::<Config>().is_err());
        assert!("thread_count".parse::<Config>().is_err());
        let err = "\n\nprime_bound = x".parse::<Config>().unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn shipped_default_file_matches_defaults() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../config/default.conf");
        let c = Config::load(path).unwrap();
        assert_eq!(c, Config::default());
    }
}
