//! Verification and benchmark front end for `gfp-fft`.

pub mod bench;
pub mod config;
pub mod error;
pub mod vecfile;
pub mod verify;

pub use bench::{cmd_bench_fft, cmd_bench_mul, cmd_profile_mul, write_csv, CsvRow, FftRow, MulRow, ProfileRow, Stat};
pub use config::{parse_radix, Backend, BenchConfig, DEFAULT_ROWS};
pub use error::{CliError, Result};
pub use verify::{cmd_verify, CheckResult, VerifyReport};

/// Env var selecting the worker count: unset means 1, 0 means one per core.
pub const THREADS_ENV: &str = "FERMAT_FFT_THREADS";

/// Builds the global rayon pool from [`THREADS_ENV`]. Returns the thread count.
#[cfg(feature = "parallel")]
pub fn configure_threads() -> Result<usize> {
    let threads = match std::env::var(THREADS_ENV) {
        Err(_) => 1,
        Ok(s) => s.trim().parse::<usize>().map_err(|_| CliError::Config(format!("{THREADS_ENV}={s:?} is not a number")))?,
    };
    // Fails only if the pool already exists, which is harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(rayon::current_num_threads())
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads() -> Result<usize> {
    Ok(1)
}
