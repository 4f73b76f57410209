//! Harness behind the `holonomy` binary: config files, deterministic CSV
//! tables, parameter sweeps, and named experiment presets. Everything here
//! is pure plumbing around the `holonomy` crate; the binary only parses
//! arguments and maps errors to exit codes.

pub mod config;
pub mod presets;
pub mod sweep;
pub mod table;

/// Harness-level failure. Core errors pass through so their exit-code
/// classification survives the trip.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] holonomy::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl HarnessError {
    /// Process exit code: 2 for numerical-invariant violations, 1 for
    /// everything else (usage, config, io).
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(holonomy::Error::NumericalInvariant(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_separate_invariant_violations() {
        let usage = HarnessError::Usage("bad".into());
        let config = HarnessError::Config("bad".into());
        let invalid = HarnessError::Core(holonomy::Error::InvalidInput("bad".into()));
        let drift = HarnessError::Core(holonomy::Error::NumericalInvariant("drift".into()));
        assert_eq!(usage.exit_code(), 1);
        assert_eq!(config.exit_code(), 1);
        assert_eq!(invalid.exit_code(), 1);
        assert_eq!(drift.exit_code(), 2);
    }
}
