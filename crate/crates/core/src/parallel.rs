//! Order-preserving data parallelism with a sequential fallback.
//!
//! Without the `parallel` feature every [`Execution`] runs sequentially.

use crate::certify::{decide, Certificate, TolProfile};
use crate::linalg::ComplexMatrix;

/// Environment variable capping the worker count (`0` or unset = automatic).
pub const THREADS_ENV: &str = "PSEUDOSPEC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Applies `f` to every item; results keep the input order.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Worker count requested through [`THREADS_ENV`]; `Err` on unparsable values.
pub fn threads_from_env() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Ok(s) if s.trim().is_empty() => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {s:?}")),
        Err(_) => Ok(0),
    }
}

/// Runs `f` on a pool of `threads` workers (`0` = the global default pool).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

pub fn decide_batch(matrices: &[ComplexMatrix], profile: &TolProfile, exec: Execution) -> Vec<Certificate> {
    map_ordered(matrices, exec, |h| decide(h, profile))
}
