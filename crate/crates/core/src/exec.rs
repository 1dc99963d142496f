//! Parallel map with a sequential fallback.
//!
//! Pairing-matrix assembly is embarrassingly parallel (every entry is an
//! independent product-and-integrate), so the only concurrency primitive the
//! crate needs is a data-parallel map over an index range.  Built with the
//! `parallel` feature (the default) this fans out through rayon; without it
//! the same call sites run sequentially, which is the configuration the
//! benchmarks compare against.

#[cfg(feature = "parallel")]
pub fn par_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Send, F: Fn(usize) -> T + Sync>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Always-sequential variant, kept available in both builds so the benches
/// can compare the two code paths inside a single compiled artifact.
pub fn seq_map<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Cap the worker pool from the `TAUT_THREADS` environment variable.  Call
/// once at startup; later calls are ignored (the global pool is built once).
#[cfg(feature = "parallel")]
pub fn init_thread_cap() {
    if let Ok(raw) = std::env::var("TAUT_THREADS") {
        if let Ok(k) = raw.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

/// Without the parallel feature there is no pool to configure.
#[cfg(not(feature = "parallel"))]
pub fn init_thread_cap() {}
