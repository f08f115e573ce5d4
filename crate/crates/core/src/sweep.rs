//! Seed sweeps for Monte Carlo size and recovery checks.
//!
//! Seeds are `base_seed + i` (wrapping) for `i in 0..count`; results keep
//! index order, so the parallel and sequential paths agree element-wise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over the derived seeds, in parallel when the `parallel`
/// feature is enabled.
pub fn map_seeds<T, F>(base_seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..count)
            .into_par_iter()
            .map(|i| f(base_seed.wrapping_add(i as u64)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seeds_seq(base_seed, count, f)
    }
}

/// Sequential reference path for [`map_seeds`].
pub fn map_seeds_seq<T, F>(base_seed: u64, count: usize, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..count)
        .map(|i| f(base_seed.wrapping_add(i as u64)))
        .collect()
}
