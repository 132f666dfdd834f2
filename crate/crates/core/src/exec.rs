//! Deterministic execution helpers.
//!
//! All reductions use fixed block boundaries so the floating-point
//! summation tree is the same for any rayon worker count and with the
//! `parallel` feature disabled. Per-index work is collected in index
//! order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Block length for partial sums. Fixed: changing it changes rounding.
const BLOCK: usize = 8192;

/// Map `f` over `0..n`, collecting results in index order.
pub(crate) fn map_indices<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sum of `f` over `xs`, reduced block-wise: sequential sums within each
/// fixed-size block, then a sequential sum of the block totals.
pub(crate) fn block_sum<F>(xs: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let partials: Vec<f64> = {
        #[cfg(feature = "parallel")]
        {
            xs.par_chunks(BLOCK)
                .map(|chunk| chunk.iter().map(|&x| f(x)).sum())
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            xs.chunks(BLOCK)
                .map(|chunk| chunk.iter().map(|&x| f(x)).sum())
                .collect()
        }
    };
    partials.iter().sum()
}

/// Ascending sort. The sorted order of `f64` values is unique under
/// `total_cmp`, so the output does not depend on thread count.
pub(crate) fn sort(xs: &mut [f64]) {
    #[cfg(feature = "parallel")]
    xs.par_sort_unstable_by(f64::total_cmp);
    #[cfg(not(feature = "parallel"))]
    xs.sort_unstable_by(f64::total_cmp);
}
