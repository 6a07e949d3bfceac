//! Per-cell work spread over scoped threads.

use std::num::NonZeroUsize;
use std::thread;

use hdm_core::exec::CellExecutor;

/// Ranges shorter than this run on the calling thread.
const MIN_PARALLEL: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct Threaded {
    threads: NonZeroUsize,
}

impl Threaded {
    /// `0` means one thread per available core.
    pub fn new(threads: usize) -> Self {
        let threads = NonZeroUsize::new(threads)
            .or_else(|| thread::available_parallelism().ok())
            .unwrap_or(NonZeroUsize::MIN);
        Threaded { threads }
    }

    pub fn threads(&self) -> usize {
        self.threads.get()
    }
}

impl CellExecutor for Threaded {
    fn map_range<T, F>(&self, start: usize, end: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let n = end.saturating_sub(start);
        let t = self.threads.get();
        if t == 1 || n < MIN_PARALLEL {
            return (start..end).map(f).collect();
        }
        let chunk = n.div_ceil(t);
        let f = &f;
        thread::scope(|s| {
            let handles: Vec<_> = (start..end)
                .step_by(chunk)
                .map(|a| s.spawn(move || (a..(a + chunk).min(end)).map(f).collect::<Vec<T>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("cell worker panicked")).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let e = Threaded::new(4);
        assert_eq!(e.map_range(3, 1003, |i| i * 2), (3..1003).map(|i| i * 2).collect::<Vec<_>>());
        assert!(e.map_range(5, 5, |i| i).is_empty());
        assert!(Threaded::new(0).threads() >= 1);
    }
}
