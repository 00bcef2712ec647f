//! Command line, file formats and parallel verification suites built on
//! [`monopot_core`].

pub mod cli;
pub mod error;
pub mod output;
pub mod points;
pub mod suites;

pub use error::AppError;
pub use monopot_core;

/// Environment variable that sets the worker count.
pub const THREADS_ENV: &str = "MONOPOT_THREADS";

/// Builds the worker pool: an explicit count wins, then `MONOPOT_THREADS`,
/// then rayon's default.
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, AppError> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| AppError::Usage(format!("{THREADS_ENV}={v:?} is not a thread count")))?,
        ),
        Err(_) => None,
    };
    let n = threads.or(from_env).unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| AppError::Usage(format!("cannot start {n} worker threads: {e}")))
}
