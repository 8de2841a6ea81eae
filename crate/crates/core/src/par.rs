//! Data-parallel helpers.
//!
//! With the `parallel` feature the helpers fan out over rayon's global pool;
//! without it, or after [`set_enabled(false)`](set_enabled), they run
//! sequentially. Output order never depends on the execution mode.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Toggle parallel execution at runtime. Has no effect without the
/// `parallel` feature.
pub fn set_enabled(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// Order-preserving map.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Order-preserving map over an index range.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// Order-preserving flat map.
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    map(items, f).into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(&xs, |x| x * x);
        set_enabled(false);
        let b = map(&xs, |x| x * x);
        set_enabled(true);
        assert_eq!(a, b);
        assert_eq!(map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
    }
}
