//! Plain-text configuration: `key=value` lines with `#` comments. Every key
//! is also a command-line flag, and flags override file values. Angle values
//! accept a `pi` suffix (`0.5pi`, `-pi`, `2pi`) so configs never carry
//! rounded decimals of π.

use crate::{HarnessError, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// Keys a config file may define, matching the flag names with hyphens
/// folded to underscores. Unknown keys are rejected to catch typos.
const KNOWN_KEYS: [&str; 25] = [
    "scheme",
    "gate",
    "theta",
    "phi",
    "gamma_g",
    "phi0",
    "epsilon",
    "delta",
    "gamma_rate",
    "step",
    "samples",
    "out",
    "level",
    "initial",
    "chi",
    "eta",
    "epsilon_min",
    "epsilon_max",
    "epsilon_count",
    "delta_min",
    "delta_max",
    "delta_count",
    "gamma_min",
    "gamma_max",
    "gamma_count",
];

/// Parses an angle in radians, accepting a `pi` suffix: `0.5pi`, `pi`,
/// `-pi`, `2pi`, or a plain number.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    if let Some(head) = t.strip_suffix("pi") {
        let factor = match head.trim_end() {
            "" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| HarnessError::Config(format!("bad angle {s:?}")))?,
        };
        return Ok(factor * std::f64::consts::PI);
    }
    t.parse::<f64>().map_err(|_| HarnessError::Config(format!("bad angle {s:?}")))
}

pub fn parse_float(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| HarnessError::Config(format!("bad number {s:?}")))
}

pub fn parse_count(s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| HarnessError::Config(format!("bad count {s:?}")))
}

/// Values loaded from a config file. A BTreeMap keeps iteration (and thus
/// error reporting) deterministic.
#[derive(Clone, Debug, Default)]
pub struct FileSettings {
    values: BTreeMap<String, String>,
}

impl FileSettings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_text(&text)
    }

    /// Later assignments to the same key win, like flags repeated on a
    /// command line.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected key=value, got {raw:?}", k + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(HarnessError::Config(format!("line {}: unknown key {key:?}", k + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(FileSettings { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Merges command-line flags with an optional config file: a flag wins,
/// then the file value, then the built-in default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Resolve<'a> {
    pub file: Option<&'a FileSettings>,
}

impl Resolve<'_> {
    fn file_raw(&self, key: &str) -> Option<&str> {
        self.file.and_then(|f| f.raw(key))
    }

    pub fn angle_opt(&self, flag: Option<&str>, key: &str) -> Result<Option<f64>> {
        match flag.or_else(|| self.file_raw(key)) {
            Some(v) => parse_angle(v).map(Some),
            None => Ok(None),
        }
    }

    pub fn angle(&self, flag: Option<&str>, key: &str, default: f64) -> Result<f64> {
        Ok(self.angle_opt(flag, key)?.unwrap_or(default))
    }

    pub fn float_opt(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file_raw(key).map(parse_float).transpose(),
        }
    }

    pub fn float(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64> {
        Ok(self.float_opt(flag, key)?.unwrap_or(default))
    }

    pub fn count_opt(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file_raw(key).map(parse_count).transpose(),
        }
    }

    pub fn count(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize> {
        Ok(self.count_opt(flag, key)?.unwrap_or(default))
    }

    pub fn string_opt(&self, flag: Option<&str>, key: &str) -> Option<String> {
        flag.or_else(|| self.file_raw(key)).map(str::to_string)
    }

    pub fn string(&self, flag: Option<&str>, key: &str, default: &str) -> String {
        self.string_opt(flag, key).unwrap_or_else(|| default.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles_accept_pi_suffix() {
        assert!((parse_angle("0.5pi").unwrap() - 0.5 * PI).abs() < 1e-15);
        assert!((parse_angle("pi").unwrap() - PI).abs() < 1e-15);
        assert!((parse_angle("-pi").unwrap() + PI).abs() < 1e-15);
        assert!((parse_angle("2pi").unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((parse_angle(" -0.25PI ").unwrap() + 0.25 * PI).abs() < 1e-15);
        assert!((parse_angle("1.2345678").unwrap() - 1.2345678).abs() < 1e-15);
        assert!(parse_angle("half a pie").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn file_parsing_handles_comments_and_blank_lines() {
        let text = "# sweep setup\nscheme = opnhqc  # trailing comment\n\ngamma_g=0.5pi\nepsilon_count = 11\n";
        let f = FileSettings::parse_text(text).unwrap();
        assert_eq!(f.raw("scheme"), Some("opnhqc"));
        assert_eq!(f.raw("gamma_g"), Some("0.5pi"));
        assert_eq!(f.raw("epsilon_count"), Some("11"));
        assert_eq!(f.raw("missing"), None);
    }

    #[test]
    fn file_parsing_rejects_unknown_keys_and_bad_lines() {
        assert!(matches!(FileSettings::parse_text("schme=opnhqc\n"), Err(HarnessError::Config(_))));
        assert!(matches!(FileSettings::parse_text("just words\n"), Err(HarnessError::Config(_))));
    }

    #[test]
    fn hyphenated_keys_normalize_and_later_values_win() {
        let f = FileSettings::parse_text("gamma-rate=1e-4\ngamma_rate=2e-4\n").unwrap();
        assert_eq!(f.raw("gamma_rate"), Some("2e-4"));
    }

    #[test]
    fn flags_override_file_values() {
        let f = FileSettings::parse_text("theta=pi\nepsilon=0.1\nsamples=11\n").unwrap();
        let r = Resolve { file: Some(&f) };
        assert!((r.angle(Some("0.5pi"), "theta", 0.0).unwrap() - 0.5 * PI).abs() < 1e-15);
        assert!((r.angle(None, "theta", 0.0).unwrap() - PI).abs() < 1e-15);
        assert!((r.float(None, "epsilon", 0.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((r.float(Some(0.05), "epsilon", 0.0).unwrap() - 0.05).abs() < 1e-15);
        assert_eq!(r.count(None, "samples", 81).unwrap(), 11);
        let bare = Resolve::default();
        assert_eq!(bare.count(None, "samples", 81).unwrap(), 81);
        assert_eq!(bare.angle(None, "phi", 0.25).unwrap(), 0.25);
    }
}
