//! Execution mode for the data-parallel loops (minor enumeration, subset
//! tables, sensing verification and search).
//!
//! With the `parallel` feature the `Parallel` mode runs on the rayon global
//! pool. Without it both modes run sequentially, so callers never need
//! feature gates of their own.

/// How the embarrassingly parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// True when `pred` holds for every item.
    pub fn all<T, F>(self, items: &[T], pred: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().all(pred)
            }
            _ => items.iter().all(pred),
        }
    }

    /// Smallest index in `start..end` for which `f` returns `Some`, together
    /// with the value. The result does not depend on the mode.
    pub fn find_first<R, F>(self, start: u64, end: u64, f: F) -> Option<(u64, R)>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (start..end)
                    .into_par_iter()
                    .filter_map(|i| f(i).map(|r| (i, r)))
                    .find_first(|_| true)
            }
            _ => (start..end).find_map(|i| f(i).map(|r| (i, r))),
        }
    }
}
