//! Order-preserving parallel map helpers.
//!
//! Every data-parallel site in the crate funnels through these two functions so that
//! the `parallel` feature can be switched off wholesale. Only element-wise maps with
//! an ordered collect are offered — no parallel reductions — which keeps floating-point
//! results bit-identical between the rayon and sequential builds: each output element
//! is produced by the same sequential arithmetic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T: Sync, U: Send, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Map `f` over `0..n`, preserving order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<U: Send, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, preserving order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_preserve_order() {
        let squares = map_range(6, |i| i * i);
        assert_eq!(squares, vec![0, 1, 4, 9, 16, 25]);
        let doubled = map_slice(&[1.0, 2.5, -3.0], |x| 2.0 * x);
        assert_eq!(doubled, vec![2.0, 5.0, -6.0]);
    }
}
