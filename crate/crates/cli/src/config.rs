//! Flat `key = value` defaults file.
//!
//! Lines starting with `#` and blank lines are skipped. Unknown keys are an
//! error so that typos do not pass silently.

use std::fs;
use std::path::Path;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "BICOEF_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Truncation order for target presets and `expand`.
    pub order: usize,
    /// Relative tolerance for float-mode agreement in `expand`.
    pub tolerance: f64,
    pub radial_steps: usize,
    pub phase_steps: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { order: bicoef::DEFAULT_ORDER, tolerance: 1e-12, radial_steps: 9, phase_steps: 16, seed: 0, samples: 10_000 }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn std::fmt::Display| format!("config line {}: {key}: {e}", lineno + 1);
            match key {
                "order" => cfg.order = value.parse().map_err(|e| bad(&e))?,
                "tolerance" => cfg.tolerance = value.parse().map_err(|e| bad(&e))?,
                "radial_steps" => cfg.radial_steps = value.parse().map_err(|e| bad(&e))?,
                "phase_steps" => cfg.phase_steps = value.parse().map_err(|e| bad(&e))?,
                "seed" => cfg.seed = value.parse().map_err(|e| bad(&e))?,
                "samples" => cfg.samples = value.parse().map_err(|e| bad(&e))?,
                _ => return Err(format!("config line {}: unknown key `{key}`", lineno + 1)),
            }
        }
        if cfg.order < 2 {
            return Err(format!("config: order must be at least 2, got {}", cfg.order));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// The file given on the command line, else the one named by
    /// [`CONFIG_ENV`], else built-in defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, String> {
        if let Some(path) = explicit {
            return Self::load(path);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
            _ => Ok(Config::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = Config::parse("# grid\nradial_steps = 5\n\nseed=42\ntolerance = 1e-9\n").unwrap();
        assert_eq!(cfg.radial_steps, 5);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.tolerance, 1e-9);
        assert_eq!(cfg.phase_steps, 16);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(Config::parse("radial = 3").is_err());
        assert!(Config::parse("seed").is_err());
        assert!(Config::parse("samples = many").is_err());
        assert!(Config::parse("order = 1").is_err());
    }
}
