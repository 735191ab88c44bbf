//! Sets of row indices, stored as bitmasks (bit `i - 1` for row `i`).

use std::fmt;

use crate::error::{Error, Result};
use crate::MAX_SIZE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowSet {
    n: usize,
    mask: u64,
}

/// Mask with bits `0..k` set.
pub(crate) fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

impl RowSet {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_SIZE, "row sets support n <= {MAX_SIZE}");
        RowSet { n, mask: 0 }
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_SIZE, "row sets support n <= {MAX_SIZE}");
        RowSet {
            n,
            mask: low_bits(n),
        }
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > MAX_SIZE {
            return Err(Error::SizeTooLarge { n, max: MAX_SIZE });
        }
        if mask & !low_bits(n) != 0 {
            let row = 64 - mask.leading_zeros() as usize;
            return Err(Error::RowOutOfRange { row, n, max: n });
        }
        Ok(RowSet { n, mask })
    }

    pub fn from_rows<I: IntoIterator<Item = usize>>(n: usize, rows: I) -> Result<Self> {
        let mut set = RowSet::empty(n);
        for row in rows {
            if row == 0 || row > n {
                return Err(Error::RowOutOfRange { row, n, max: n });
            }
            set.mask |= 1 << (row - 1);
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, row: usize) -> bool {
        row >= 1 && row <= self.n && self.mask >> (row - 1) & 1 == 1
    }

    pub fn insert(&mut self, row: usize) {
        assert!(
            row >= 1 && row <= self.n,
            "row {row} outside 1..={}",
            self.n
        );
        self.mask |= 1 << (row - 1);
    }

    pub fn remove(&mut self, row: usize) {
        if row >= 1 && row <= self.n {
            self.mask &= !(1 << (row - 1));
        }
    }

    pub fn is_subset(&self, other: &RowSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &RowSet) -> RowSet {
        RowSet {
            n: self.n.max(other.n),
            mask: self.mask | other.mask,
        }
    }

    /// Ascending member rows.
    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&r| self.contains(r))
    }

    /// Length of the longest block of consecutive rows in the set.
    pub fn max_consecutive_run(&self) -> usize {
        max_consecutive_run(self.mask)
    }
}

/// Longest run of consecutive set bits in `mask`; 0 for an empty mask.
pub fn max_consecutive_run(mask: u64) -> usize {
    let mut m = mask;
    let mut best = 0;
    while m != 0 {
        m &= m << 1;
        best += 1;
    }
    best
}

impl fmt::Display for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.rows().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}
