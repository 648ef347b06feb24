//! Trial fan-out for verification sweeps.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] maps trials
//! over the rayon pool; without it every mode runs sequentially. Results are
//! always returned in trial order, so reports do not depend on the mode.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Applies `f` to `0..trials`, collecting in index order.
    pub fn map<T, F>(self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..trials).map(f).collect(),
            Exec::Parallel => par_map(trials, f),
        }
    }

    /// Whether trials actually run on more than one thread.
    pub fn is_parallel(self) -> bool {
        self == Exec::Parallel && cfg!(feature = "parallel")
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_in_order() {
        let f = |i: u64| i * i + 1;
        assert_eq!(Exec::Sequential.map(500, f), Exec::Parallel.map(500, f));
        assert!(Exec::Sequential.map(0, f).is_empty());
    }
}
