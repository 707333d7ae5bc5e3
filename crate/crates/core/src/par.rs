//! Data-parallel helpers. With the `parallel` feature these fan out over
//! rayon's global pool; without it they run sequentially. Results are
//! always reduced in input order so output does not depend on scheduling.
//! Short inputs stay on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Inputs shorter than this are handled on the calling thread.
pub const MIN_PARALLEL_LEN: usize = 32;

/// `true` if `f` holds for some item.
pub fn any<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= MIN_PARALLEL_LEN {
        return items.par_iter().any(f);
    }
    items.iter().any(f)
}

/// Index of the first item (in input order) satisfying `f`.
pub fn position_first<T, F>(items: &[T], f: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= MIN_PARALLEL_LEN {
        return items.par_iter().position_first(f);
    }
    items.iter().position(f)
}

/// `items.map(f)` collected in input order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= MIN_PARALLEL_LEN {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// `(0..n).map(f)` collected in index order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if n >= MIN_PARALLEL_LEN {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Runs `f` on a single worker thread. Used by benchmarks and tests to
/// compare against the default pool; a no-op without `parallel`.
pub fn sequential<R: Send, F: FnOnce() -> R + Send>(f: F) -> R {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("single-thread pool")
            .install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}
