//! Multi-indices and index pairs `(n; m)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pair of integer multi-indices of equal length `r`.
///
/// Membership in the admissible cone means `n_j + m_j >= 0` for every `j`;
/// constructors enforce it. `|n|` and `|m|` are plain sums and may be negative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexPair {
    pub n: Vec<i64>,
    pub m: Vec<i64>,
}

impl IndexPair {
    pub fn new(n: Vec<i64>, m: Vec<i64>) -> Result<Self> {
        if n.len() != m.len() || n.is_empty() {
            return Err(Error::InvalidInput(format!(
                "index components must have equal nonzero length, got {} and {}",
                n.len(),
                m.len()
            )));
        }
        let idx = Self { n, m };
        if !idx.in_cone() {
            return Err(Error::InvalidIndex(idx.to_string()));
        }
        Ok(idx)
    }

    /// Convenience for scalar (`r = 1`) indices.
    pub fn scalar(n: i64, m: i64) -> Result<Self> {
        Self::new(vec![n], vec![m])
    }

    /// The boundary index `(n; -n)`.
    pub fn boundary(n: Vec<i64>) -> Self {
        let m = n.iter().map(|x| -x).collect();
        Self { n, m }
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    pub fn abs_n(&self) -> i64 {
        self.n.iter().sum()
    }

    pub fn abs_m(&self) -> i64 {
        self.m.iter().sum()
    }

    /// `|n| + |m|`, the size of the moment matrix.
    pub fn size(&self) -> usize {
        (self.abs_n() + self.abs_m()) as usize
    }

    pub fn block_height(&self, j: usize) -> usize {
        (self.n[j] + self.m[j]) as usize
    }

    pub fn in_cone(&self) -> bool {
        self.n.iter().zip(&self.m).all(|(a, b)| a + b >= 0)
    }

    pub fn is_boundary(&self) -> bool {
        self.n.iter().zip(&self.m).all(|(a, b)| a + b == 0)
    }

    fn bumped(&self, slot_n: bool, j: usize, by: i64) -> Option<Self> {
        let mut out = self.clone();
        if slot_n {
            out.n[j] += by;
        } else {
            out.m[j] += by;
        }
        out.in_cone().then_some(out)
    }

    /// `(n + by e_j; m)`, or `None` when it leaves the cone.
    pub fn shift_n(&self, j: usize, by: i64) -> Option<Self> {
        self.bumped(true, j, by)
    }

    /// `(n; m + by e_j)`, or `None` when it leaves the cone.
    pub fn shift_m(&self, j: usize, by: i64) -> Option<Self> {
        self.bumped(false, j, by)
    }

    /// `(n + e_j; m)`; always admissible.
    pub fn n_plus(&self, j: usize) -> Self {
        self.bumped(true, j, 1).expect("raising n keeps the index admissible")
    }

    pub fn m_plus(&self, j: usize) -> Self {
        self.bumped(false, j, 1).expect("raising m keeps the index admissible")
    }

    pub fn n_minus(&self, j: usize) -> Option<Self> {
        self.bumped(true, j, -1)
    }

    pub fn m_minus(&self, j: usize) -> Option<Self> {
        self.bumped(false, j, -1)
    }

    /// `(m; n)`.
    pub fn swapped(&self) -> Self {
        Self { n: self.m.clone(), m: self.n.clone() }
    }

    pub fn n_nonnegative(&self) -> bool {
        self.n.iter().all(|&x| x >= 0)
    }

    pub fn m_nonnegative(&self) -> bool {
        self.m.iter().all(|&x| x >= 0)
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({};{})", join(&self.n), join(&self.m))
    }
}

impl fmt::Debug for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Enumerates every admissible pair with components in `[lo, hi]` and
/// `|n| + |m| <= max_size`, in lexicographic order.
pub fn enumerate_box(r: usize, lo: i64, hi: i64, max_size: i64) -> Vec<IndexPair> {
    let mut out = Vec::new();
    let mut n = vec![lo; r];
    let mut m = vec![lo; r];
    let total = 2 * r;
    loop {
        let idx = IndexPair { n: n.clone(), m: m.clone() };
        if idx.in_cone() && idx.abs_n() + idx.abs_m() <= max_size {
            out.push(idx);
        }
        // odometer over the 2r components
        let mut pos = total;
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            let slot = if pos < r { &mut n[pos] } else { &mut m[pos - r] };
            if *slot < hi {
                *slot += 1;
                break;
            }
            *slot = lo;
        }
    }
}

/// Multi-indices `n` with `0 <= n_j <= hi` and `|n| <= max_total`.
pub fn enumerate_multi(r: usize, hi: i64, max_total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut n = vec![0i64; r];
    loop {
        if n.iter().sum::<i64>() <= max_total {
            out.push(n.clone());
        }
        let mut pos = r;
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            if n[pos] < hi {
                n[pos] += 1;
                break;
            }
            n[pos] = 0;
        }
    }
}
