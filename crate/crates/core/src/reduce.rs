//! Order-fixed floating point reductions.
//!
//! Parallel sums are computed by collecting per-item values in their natural
//! order and folding them with a fixed pairwise tree, so results do not depend
//! on the number of worker threads.

const LEAF: usize = 8;

/// Pairwise (tree) summation with a fixed association order.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Maximum that propagates NaN as an error value rather than silently skipping it.
pub(crate) fn max_f64(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}
