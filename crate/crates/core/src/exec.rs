//! Sequential/parallel execution switch for the data-parallel loops.
//!
//! With the `parallel` feature disabled, [`Strategy::Parallel`] runs
//! sequentially; results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// `items.iter().map(f).collect()`, order preserved.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => items.par_iter().map(f).collect(),
            #[cfg(not(feature = "parallel"))]
            Strategy::Parallel => items.iter().map(f).collect(),
        }
    }

    /// `(0..len).map(f).collect()`, order preserved.
    pub fn map_range<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            Strategy::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => (0..len).into_par_iter().map(f).collect(),
            #[cfg(not(feature = "parallel"))]
            Strategy::Parallel => (0..len).map(f).collect(),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let a = Strategy::Sequential.map(&items, |x| x * x);
        let b = Strategy::Parallel.map(&items, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(
            Strategy::Sequential.map_range(100, |i| i + 1),
            Strategy::Parallel.map_range(100, |i| i + 1)
        );
    }
}
