//! Command implementations behind the `sumprod` binary.
//!
//! Every command writes its report to a caller-supplied writer and returns the
//! process exit code; usage and hypothesis errors surface as `Err` and map to
//! exit code 1 in the binary.

pub mod bench;
pub mod extremal;
pub mod family;
pub mod oracle;
pub mod sweep;
pub mod verify;

use anyhow::{ensure, Context, Result};
use sumprod_core::{build_dlog, make_field, Field};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Environment variable read for the default worker count.
pub const THREADS_ENV: &str = "SUMPROD_THREADS";

/// Field of order `p` with discrete-log tables.
pub fn field_with_dlog(p: u64) -> Result<Field> {
    let f = make_field(p).with_context(|| format!("invalid modulus {p}"))?;
    Ok(build_dlog(&f))
}

/// Runs `work` on a pool of `threads` workers, or the default pool when `None`.
pub fn with_pool<T: Send>(threads: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(work()),
        Some(t) => {
            ensure!(t >= 1, "--threads must be at least 1");
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build()?;
            Ok(pool.install(work))
        }
    }
}
