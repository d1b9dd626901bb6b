//! Order-preserving batch evaluation. With the `parallel` feature (on by
//! default) work is spread over the rayon pool; without it, or through the
//! `_seq` variants, it runs on the calling thread. Results come back in
//! input order either way, so logs built from them are reproducible.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const PARALLEL: bool = cfg!(feature = "parallel");

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// `f` over every index of `range`, typically seeds.
pub fn map_range<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_range_seq(range, f)
    }
}

pub fn map_range_seq<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    F: Fn(u64) -> R,
{
    range.map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let xs: Vec<u64> = (0..1000).collect();
        let sq = map(&xs, |x| x * x);
        assert_eq!(sq, map_seq(&xs, |x| x * x));
        assert_eq!(map_range(0..1000, |i| i * i), sq);
        assert_eq!(map_range_seq(5..8, |i| i), vec![5, 6, 7]);
    }
}
