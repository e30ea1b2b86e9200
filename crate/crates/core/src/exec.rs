//! Sequential or data-parallel execution of independent work items.

/// How independent work items are evaluated. With the `parallel` feature
/// disabled, `Parallel` falls back to sequential evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// Number of items of `iter` satisfying `pred`.
    pub fn count_filtered<I, F>(self, iter: I, pred: F) -> u64
    where
        I: Iterator + Send,
        I::Item: Send,
        F: Fn(&I::Item) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::iter::{ParallelBridge, ParallelIterator};
                iter.par_bridge().filter(|x| pred(x)).count() as u64
            }
            _ => iter.filter(|x| pred(x)).count() as u64,
        }
    }
}
