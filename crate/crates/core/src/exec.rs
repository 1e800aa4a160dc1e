//! Execution strategy for embarrassingly parallel work: sweep jobs and
//! Monte-Carlo sample blocks.
//!
//! With the `parallel` feature (default) [`map_indexed`] fans out over the
//! rayon pool; without it the same call runs sequentially. Work items are
//! indexed and independently seeded, so the two paths produce identical
//! results and callers never need to care which one ran.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_sequential(n, f)
}

/// Always-sequential variant, kept available for comparison benchmarks and
/// equivalence tests.
pub fn map_indexed_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatched_and_sequential_agree() {
        let a = map_indexed(100, |i| i * i);
        let b = map_indexed_sequential(100, |i| i * i);
        assert_eq!(a, b);
    }
}
