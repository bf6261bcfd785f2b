//! Data-parallel iteration with a sequential fallback.
//!
//! With the `parallel` feature the helpers here fan out over rayon's global
//! pool. Without it they are plain iterator loops. Output order always
//! follows input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `true` when built with the `parallel` feature.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// Maps `f` over `items`, collecting into a `Result` in input order.
#[cfg(feature = "parallel")]
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    F: Fn(&T) -> Result<U, E>,
{
    try_map_sequential(items, f)
}

/// Sequential variant, always available (benchmarks compare the two).
pub fn try_map_sequential<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    F: Fn(&T) -> Result<U, E>,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..count` in input order.
#[cfg(feature = "parallel")]
pub fn map_range<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(count: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(f).collect()
}
