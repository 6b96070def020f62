//! Data-parallel map with a sequential fallback.
//!
//! Built with the `parallel` feature (default) this fans work out over the
//! rayon thread pool; without it the same call runs sequentially. All
//! workloads routed through here are pure functions over immutable inputs,
//! and results come back in input order either way.

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Name of the active execution mode, for logs and bench labels.
pub fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}
