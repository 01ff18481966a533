//! Fixtures shared by the benchmarks.

use mopuc_core::index::enumerate_box;
use mopuc_core::{systems, IndexPair, LaurentMop, Scalar};

/// The three-functional atomic system with a fresh (empty) memo.
pub fn three_atomic<S: Scalar>() -> LaurentMop<S> {
    LaurentMop::new(systems::three_atomic().expect("bundled system builds"))
}

pub fn two_functionals<S: Scalar>() -> LaurentMop<S> {
    LaurentMop::new(systems::s2().expect("bundled system builds"))
}

/// Indices with components in `[-1, hi]` and total size at most `size`.
pub fn indices(r: usize, hi: i64, size: i64) -> Vec<IndexPair> {
    enumerate_box(r, -1, hi, size)
}
