//! Data-parallel fan-out with a sequential fallback.
//!
//! Batch drivers (scans, acceptance sweeps, finite-difference stencils) call
//! [`map`], which runs on rayon when the `parallel` feature is enabled and
//! falls back to a plain loop otherwise. Results are collected by input index,
//! so both paths produce identical output.

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_seq(items, f)
}

/// Always-sequential map; the benchmark baseline.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
