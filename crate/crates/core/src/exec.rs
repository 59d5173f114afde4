//! Data-parallel helpers. With the `parallel` feature (default) the closures
//! run on the rayon pool; without it they run sequentially with identical
//! results — callers must keep per-item work independent and deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn preserves_order() {
        let out = super::map_collect((0..100).collect::<Vec<_>>(), |x| x * x);
        assert_eq!(out[7], 49);
        assert_eq!(out.len(), 100);
    }
}
