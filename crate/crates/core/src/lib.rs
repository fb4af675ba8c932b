//! Homology, Hodge spectra, Lefschetz numbers and cup pairings on finite
//! simplicial complexes, plus a rule engine for extensions between entries
//! of the periodic system of positive curvature manifolds.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod chain;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod exact;
pub mod hodge;
pub mod io;
pub mod lanczos;
pub mod lefschetz;
pub mod selftest;

pub use error::{Error, Result};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "HODGEFORGE_THREADS";

/// Sizes the global rayon pool from `HODGEFORGE_THREADS` when set. Returns
/// the thread count applied, or `None` when the variable is unset or the
/// pool was already built.
pub fn init_threads_from_env() -> Result<Option<usize>> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(None) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::MalformedInput(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok().map(|_| n))
}
