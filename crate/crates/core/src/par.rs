//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the helpers dispatch to rayon
//! when asked to; without it every call runs sequentially and the `parallel`
//! argument is ignored.

/// Maps `f` over `0..len` and collects the results in index order.
pub fn map_range<R, F>(len: usize, parallel: bool, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    (0..len).map(f).collect()
}

/// Maps `f` over a slice and collects the results in order.
pub fn map_slice<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_range(items.len(), parallel, |i| f(&items[i]))
}

/// Returns `Some(i)` for some index with `pred(i)` true, or `None`.
/// The sequential path returns the smallest such index.
pub fn find_any<F>(len: usize, parallel: bool, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().find_any(|&i| pred(i));
        }
    }
    let _ = parallel;
    (0..len).find(|&i| pred(i))
}

/// Whether the crate was built with rayon support.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}
