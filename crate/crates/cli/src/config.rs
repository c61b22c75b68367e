//! Run configuration: defaults, `APRIME_PRECISION`, a flat `key = value`
//! file, then command-line flags, each overriding the previous layer.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use aprime::interval::DEFAULT_DIGITS;

/// Keys accepted in a configuration file.
pub const KNOWN_KEYS: [&str; 5] = [
    "precision",
    "prime_cap",
    "enumeration_cap",
    "jobs",
    "output",
];

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Decimal digits of working precision.
    pub precision: u32,
    /// Maximum number of primes an explicit constant may range over.
    pub prime_cap: usize,
    /// Largest target accepted by enumeration commands.
    pub enumeration_cap: u64,
    /// Worker threads; `0` uses every core.
    pub jobs: usize,
    /// Output file; standard output when absent.
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: DEFAULT_DIGITS,
            prime_cap: 2_000_000,
            enumeration_cap: 10_000_000,
            jobs: 0,
            output: None,
        }
    }
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub prime_cap: Option<usize>,
    pub enumeration_cap: Option<u64>,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse()
        .map_err(|_| format!("invalid value {v:?} for {key}"))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let k = k.trim();
        if !KNOWN_KEYS.contains(&k) {
            return Err(format!("line {}: unknown key {k:?}", i + 1));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl RunConfig {
    /// Layers the environment, the optional file and the flags.
    pub fn resolve(
        env_precision: Option<String>,
        file: Option<&Path>,
        flags: Overrides,
    ) -> Result<Self, String> {
        let mut c = RunConfig::default();
        if let Some(p) = env_precision {
            c.precision = parse("APRIME_PRECISION", p.trim())?;
        }
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            for (k, v) in parse_file(&text)? {
                match k.as_str() {
                    "precision" => c.precision = parse(&k, &v)?,
                    "prime_cap" => c.prime_cap = parse(&k, &v)?,
                    "enumeration_cap" => c.enumeration_cap = parse(&k, &v)?,
                    "jobs" => c.jobs = parse(&k, &v)?,
                    "output" => c.output = Some(PathBuf::from(v)),
                    _ => unreachable!("keys are validated while parsing"),
                }
            }
        }
        if let Some(v) = flags.precision {
            c.precision = v;
        }
        if let Some(v) = flags.prime_cap {
            c.prime_cap = v;
        }
        if let Some(v) = flags.enumeration_cap {
            c.enumeration_cap = v;
        }
        if let Some(v) = flags.jobs {
            c.jobs = v;
        }
        if flags.output.is_some() {
            c.output = flags.output;
        }
        if c.precision == 0 || c.prime_cap == 0 || c.enumeration_cap == 0 {
            return Err("precision and caps must be positive".into());
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let c = RunConfig::resolve(Some("80".into()), None, Overrides::default()).unwrap();
        assert_eq!(c.precision, 80);
        let flags = Overrides {
            precision: Some(30),
            ..Default::default()
        };
        assert_eq!(
            RunConfig::resolve(Some("80".into()), None, flags)
                .unwrap()
                .precision,
            30
        );
        assert!(RunConfig::resolve(Some("x".into()), None, Overrides::default()).is_err());
    }

    #[test]
    fn file_keys() {
        let m = parse_file("precision = 40\n# note\njobs=2 # inline\n").unwrap();
        assert_eq!(m["precision"], "40");
        assert_eq!(m["jobs"], "2");
        assert!(parse_file("colour = red")
            .unwrap_err()
            .contains("unknown key"));
        assert!(parse_file("precision").is_err());
    }
}
