//! Data-parallel helpers with a sequential fallback.
//!
//! Hot loops (experiment sweeps, LP batches, grid scans) map an index range
//! through a pure function and collect results in index order, so outputs
//! are identical whether the `parallel` feature (rayon) is on or off.
//! [`map_indexed_seq`] is the always-sequential path; the benches compare
//! the two directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `0..count` through `f` in parallel (rayon) when the `parallel`
/// feature is enabled, sequentially otherwise. Results keep index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_indexed_seq(count, f)
}

/// Sequential reference path, available regardless of features.
pub fn map_indexed_seq<U, F>(count: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let par = map_indexed(100, |i| i * i);
        let seq = map_indexed_seq(100, |i| i * i);
        assert_eq!(par, seq);
    }
}
