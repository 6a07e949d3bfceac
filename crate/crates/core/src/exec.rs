//! Execution strategy for per-cell work.
//!
//! Assembly computes independent local contributions per cell and then
//! scatters them in cell order, so the result does not depend on how the
//! local work was scheduled. The scheduling itself is behind
//! [`CellExecutor`]; this crate ships only the sequential one.

use alloc::vec::Vec;

pub trait CellExecutor: Sync {
    /// `(start..end).map(f).collect()`, possibly computed concurrently but
    /// returned in index order.
    fn map_range<T, F>(&self, start: usize, end: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl CellExecutor for Sequential {
    fn map_range<T, F>(&self, start: usize, end: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (start..end).map(f).collect()
    }
}

/// Cells handed to the executor at once; bounds the memory held by local
/// contributions awaiting the scatter.
pub const CHUNK: usize = 2048;
