//! Execution strategy for the batch drivers (coverage sweeps, census runs).
//!
//! With the `parallel` feature (the default), [`map_ordered`] fans work out
//! over the rayon pool that is current at the call site, so a caller can
//! bound parallelism by installing a sized pool. Without the feature it
//! degrades to a plain sequential loop. Both paths return results in input
//! order, so downstream output is identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_ordered<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving input order in the output.
#[cfg(not(feature = "parallel"))]
pub fn map_ordered<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Always-sequential variant, kept available so benchmarks can compare the
/// two execution modes inside one build.
pub fn map_sequential<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}

/// Whether this build dispatches batch work to rayon.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let out = map_ordered(items.clone(), |x| x * 2);
        let seq = map_sequential(items, |x| x * 2);
        assert_eq!(out, seq);
        assert_eq!(out[10], 20);
    }
}
