//! Execution strategy for the embarrassingly parallel sweeps (table cells,
//! verification loops, oracle scans).
//!
//! With the `parallel` feature (default) the drivers fan out over rayon;
//! without it they fall back to plain sequential loops. The `*_seq` variants
//! are always compiled so the benchmark suite can compare both strategies in
//! a single build.

pub(crate) fn map_indices_seq<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

/// First failure (by index order) of a fallible sweep, `None` when clean.
pub(crate) fn find_failure_seq<E>(n: usize, f: impl Fn(usize) -> Option<E>) -> Option<E> {
    (0..n).find_map(f)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    map_indices_seq(n, f)
}

/// Parallel counterpart of [`find_failure_seq`]; `find_map_first` keeps the
/// reported counterexample deterministic.
#[cfg(feature = "parallel")]
pub(crate) fn find_failure<E, F>(n: usize, f: F) -> Option<E>
where
    E: Send,
    F: Fn(usize) -> Option<E> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_failure<E, F>(n: usize, f: F) -> Option<E>
where
    F: Fn(usize) -> Option<E>,
{
    find_failure_seq(n, f)
}
