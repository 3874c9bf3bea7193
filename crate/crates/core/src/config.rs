//! Run configuration shared by every CLI command.
//!
//! A [`RunConfig`] is assembled in fixed precedence order: built-in defaults,
//! then the `QML_THREADS` environment variable, then a line-oriented
//! `key=value` config file (`#` starts a comment), then command-line flags.
//! Later sources overwrite earlier ones field by field, so a config file can
//! preset any flag and any flag can override the file.
//!
//! The resolved configuration is validated once, before any computation, and
//! echoed (to stderr) by every command so runs are reproducible from their
//! logs alone.

use std::path::PathBuf;

use thiserror::Error;

use crate::chars::FamilyPredicate;
use crate::field::FieldCtx;

/// Everything a command run depends on besides its subcommand-specific
/// switches: field size, genus selection, truncation/precision knobs for the
/// Euler evaluations, the brute-force cost ceiling, threading, and the master
/// seed that all sampled randomness flows from.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Base field size; must be a prime congruent to 3 mod 4.
    pub q: u64,
    /// Genus for single-genus commands; `None` until supplied.
    pub g: Option<u64>,
    /// Genus list for the report command.
    pub g_list: Vec<u64>,
    /// Truncation degree for Euler-product evaluations.
    pub trunc_degree: u32,
    /// Working precision (significant decimal digits) for those evaluations.
    pub precision: u64,
    /// Ceiling on the residue count of any single brute enumeration.
    pub budget: u128,
    /// Worker threads; `None` means available parallelism.
    pub threads: Option<usize>,
    /// Master seed; every sampled quantity derives from it deterministically.
    pub seed: u64,
    /// Output file; `None` writes to stdout.
    pub out: Option<PathBuf>,
    /// Family membership rule.
    pub predicate: FamilyPredicate,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 3,
            g: None,
            g_list: Vec::new(),
            trunc_degree: 25,
            precision: 50,
            budget: 10_000_000,
            threads: None,
            seed: 1,
            out: None,
            predicate: FamilyPredicate::DivisorClosure,
        }
    }
}

/// A configuration source that failed to parse or validate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config line {line}: expected key=value, got {text:?}")]
    NotKeyValue { line: usize, text: String },
    #[error("config line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: bad value for {key}: {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Parses a predicate name as used by both the config file and the CLI flag.
pub fn parse_predicate(s: &str) -> Option<FamilyPredicate> {
    match s {
        "divisor-closure" => Some(FamilyPredicate::DivisorClosure),
        "literal-prime" => Some(FamilyPredicate::LiteralPrime),
        _ => None,
    }
}

/// The canonical spelling of a predicate, inverse to [`parse_predicate`].
pub fn predicate_name(p: FamilyPredicate) -> &'static str {
    match p {
        FamilyPredicate::DivisorClosure => "divisor-closure",
        FamilyPredicate::LiteralPrime => "literal-prime",
    }
}

fn parse_g_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| part.trim().parse::<u64>().map_err(|e| e.to_string()))
        .collect()
}

impl RunConfig {
    /// Overlays the `QML_THREADS` environment variable (if set and parseable)
    /// onto the thread count. A malformed value is an error, not a silent
    /// fallback.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        match std::env::var("QML_THREADS") {
            Ok(v) => {
                let n: usize = v.parse().map_err(|_| {
                    ConfigError::Invalid(format!("QML_THREADS={v:?} is not a thread count"))
                })?;
                if n == 0 {
                    return Err(ConfigError::Invalid("QML_THREADS must be ≥ 1".into()));
                }
                self.threads = Some(n);
                Ok(())
            }
            Err(_) => Ok(()),
        }
    }

    /// Overlays a config file's contents. Lines are `key=value`; blank lines
    /// and `#` comments (whole-line or trailing) are ignored. Unknown keys
    /// are rejected so typos fail loudly.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let stripped = stripped.trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or_else(|| ConfigError::NotKeyValue { line, text: stripped.to_string() })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: &str| ConfigError::BadValue {
                line,
                key: key.to_string(),
                msg: msg.to_string(),
            };
            match key {
                "q" => self.q = value.parse().map_err(|_| bad("not an integer"))?,
                "g" => self.g = Some(value.parse().map_err(|_| bad("not an integer"))?),
                "g-list" => self.g_list = parse_g_list(value).map_err(|m| bad(&m))?,
                "trunc-degree" => {
                    self.trunc_degree = value.parse().map_err(|_| bad("not an integer"))?
                }
                "precision" => self.precision = value.parse().map_err(|_| bad("not an integer"))?,
                "budget" => self.budget = value.parse().map_err(|_| bad("not an integer"))?,
                "threads" => {
                    self.threads = Some(value.parse().map_err(|_| bad("not a thread count"))?)
                }
                "seed" => self.seed = value.parse().map_err(|_| bad("not an integer"))?,
                "out" => self.out = Some(PathBuf::from(value)),
                "predicate" => {
                    self.predicate = parse_predicate(value)
                        .ok_or_else(|| bad("expected divisor-closure or literal-prime"))?
                }
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        Ok(())
    }

    /// Checks the resolved configuration before any computation: the field
    /// must exist (prime `q ≡ 3 mod 4`), and counts must be positive.
    pub fn validate(&self) -> Result<(), ConfigError> {
        FieldCtx::new(self.q).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.budget == 0 {
            return Err(ConfigError::Invalid("budget must be ≥ 1".into()));
        }
        if self.precision == 0 {
            return Err(ConfigError::Invalid("precision must be ≥ 1".into()));
        }
        if self.threads == Some(0) {
            return Err(ConfigError::Invalid("threads must be ≥ 1".into()));
        }
        Ok(())
    }

    /// One-line echo of every resolved field, stable across runs with the
    /// same inputs.
    pub fn describe(&self) -> String {
        let g = match self.g {
            Some(g) => g.to_string(),
            None => "-".to_string(),
        };
        let g_list = if self.g_list.is_empty() {
            "-".to_string()
        } else {
            self.g_list.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")
        };
        let threads = match self.threads {
            Some(n) => n.to_string(),
            None => "auto".to_string(),
        };
        let out = match &self.out {
            Some(p) => p.display().to_string(),
            None => "-".to_string(),
        };
        format!(
            "q={} g={} g-list={} trunc-degree={} precision={} budget={} threads={} seed={} out={} predicate={}",
            self.q,
            g,
            g_list,
            self.trunc_degree,
            self.precision,
            self.budget,
            threads,
            self.seed,
            out,
            predicate_name(self.predicate),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_documented_ones() {
        let c = RunConfig::default();
        assert_eq!(c.q, 3);
        assert_eq!(c.trunc_degree, 25);
        assert_eq!(c.precision, 50);
        assert_eq!(c.budget, 10_000_000);
        assert_eq!(c.seed, 1);
        assert_eq!(c.predicate, FamilyPredicate::DivisorClosure);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn file_overlay_sets_every_key_and_ignores_comments() {
        let mut c = RunConfig::default();
        c.apply_file(
            "# experiment bundle\n\
             q = 7\n\
             g = 3        # inline comment\n\
             g-list = 0, 3, 6\n\
             trunc-degree = 30\n\
             precision = 60\n\
             budget = 123456789\n\
             threads = 2\n\
             seed = 42\n\
             out = /tmp/r.json\n\
             predicate = literal-prime\n\
             \n",
        )
        .unwrap();
        assert_eq!(c.q, 7);
        assert_eq!(c.g, Some(3));
        assert_eq!(c.g_list, vec![0, 3, 6]);
        assert_eq!(c.trunc_degree, 30);
        assert_eq!(c.precision, 60);
        assert_eq!(c.budget, 123_456_789);
        assert_eq!(c.threads, Some(2));
        assert_eq!(c.seed, 42);
        assert_eq!(c.out, Some(PathBuf::from("/tmp/r.json")));
        assert_eq!(c.predicate, FamilyPredicate::LiteralPrime);
    }

    #[test]
    fn unknown_keys_and_malformed_lines_are_rejected_with_line_numbers() {
        let mut c = RunConfig::default();
        match c.apply_file("q=3\nbogus=1\n") {
            Err(ConfigError::UnknownKey { line, key }) => {
                assert_eq!(line, 2);
                assert_eq!(key, "bogus");
            }
            other => panic!("expected UnknownKey, got {other:?}"),
        }
        match c.apply_file("just words\n") {
            Err(ConfigError::NotKeyValue { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected NotKeyValue, got {other:?}"),
        }
        match c.apply_file("g = three\n") {
            Err(ConfigError::BadValue { line, key, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(key, "g");
            }
            other => panic!("expected BadValue, got {other:?}"),
        }
    }

    #[test]
    fn validation_rejects_bad_fields_and_zero_counts() {
        let mut c = RunConfig { q: 5, ..RunConfig::default() };
        assert!(c.validate().is_err(), "q ≡ 1 mod 4 has no quadratic model here");
        c.q = 9;
        assert!(c.validate().is_err(), "composite q rejected");
        c.q = 3;
        c.budget = 0;
        assert!(c.validate().is_err());
        c.budget = 1;
        c.threads = Some(0);
        assert!(c.validate().is_err());
        c.threads = None;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn predicate_names_round_trip() {
        for p in [FamilyPredicate::DivisorClosure, FamilyPredicate::LiteralPrime] {
            assert_eq!(parse_predicate(predicate_name(p)), Some(p));
        }
        assert_eq!(parse_predicate("prime"), None);
    }

    #[test]
    fn describe_echoes_resolved_values() {
        let mut c = RunConfig::default();
        c.g = Some(3);
        c.g_list = vec![0, 3];
        let line = c.describe();
        assert!(line.contains("q=3"));
        assert!(line.contains("g=3"));
        assert!(line.contains("g-list=0,3"));
        assert!(line.contains("predicate=divisor-closure"));
        assert!(line.contains("threads=auto"));
    }
}
