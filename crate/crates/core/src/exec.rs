//! Sequential or rayon-backed execution of the crate's batch loops.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.
//! Results never depend on the mode: every helper here preserves input order
//! or reduces with an associative, commutative operation.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this mode actually runs on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, keeping input order.
pub fn map_collect<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over `start..end` and folds the results with `combine`.
pub fn map_reduce<R, F, C>(exec: Execution, start: u64, end: u64, identity: R, f: F, combine: C) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (start..end).into_par_iter().map(f).reduce(|| identity.clone(), &combine);
    }
    let _ = exec;
    (start..end).map(f).fold(identity, combine)
}
