//! Worker-pool configuration.
//!
//! Results never depend on the number of workers: parallel loops collect in
//! index order and reductions use fixed summation trees.

use crate::error::{Error, Result};

pub const THREADS_ENV: &str = "OPERANOID_THREADS";

/// Parses a thread-count setting; `0` and empty mean automatic.
pub fn parse_threads(value: &str) -> Result<usize> {
    let v = value.trim();
    if v.is_empty() {
        return Ok(0);
    }
    v.parse()
        .map_err(|_| Error::InvalidInput(format!("{THREADS_ENV} must be a non-negative integer, got {value:?}")))
}

/// Installs the global rayon pool sized by `OPERANOID_THREADS` (0 or unset is
/// automatic). Returns the number of workers in use. Calling it again after a
/// pool exists is harmless.
pub fn configure_from_env() -> Result<usize> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => parse_threads(&v)?,
        Err(_) => 0,
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(rayon::current_num_threads())
}
