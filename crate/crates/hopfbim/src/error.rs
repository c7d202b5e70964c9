//! Engine-wide error type. Variants map onto the CLI exit codes:
//! input problems exit 2, resource-cap refusals exit 3, failed mathematical
//! checks are reported data (exit 1) rather than errors.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("input error: {0}")]
    Input(String),
    #[error("resource cap exceeded: needed {needed}, cap {cap} ({context})")]
    Cap { needed: usize, cap: usize, context: String },
}

pub type Result<T> = std::result::Result<T, EngineError>;

/// Refuse computations whose pre-quotient ambient dimension exceeds the cap.
pub fn check_cap(needed: usize, cap: usize, context: &str) -> Result<()> {
    if needed > cap {
        Err(EngineError::Cap { needed, cap, context: context.to_string() })
    } else {
        Ok(())
    }
}

/// Default bound on pre-quotient ambient dimensions.
pub const DEFAULT_CAP: usize = 1 << 16;
