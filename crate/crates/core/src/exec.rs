//! Execution strategy for the data-parallel hot loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! pool. Without it both variants run the same sequential loop. Results are
//! identical either way: the search helpers always return the lowest-index hit.

/// How index-space loops are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// First `i` in `0..n` (lowest index) for which `f` returns `Some`.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().find_map_first(f)
            }
            _ => (0..n).find_map(f),
        }
    }

    /// `f(0), f(1), ..., f(n-1)` in order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_is_lowest_index() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let hit = exec.find_first(10_000, |i| (i % 777 == 776).then_some(i));
            assert_eq!(hit, Some(776));
            assert_eq!(exec.find_first(100, |_| None::<usize>), None);
        }
    }

    #[test]
    fn map_keeps_order() {
        let a = Exec::Sequential.map(1000, |i| i * i);
        let b = Exec::Parallel.map(1000, |i| i * i);
        assert_eq!(a, b);
    }
}
