//! Monotone triangles: validation, the extremal and near-minimal triangles,
//! distinguished rows, and rank reversal.

use std::fmt;

use crate::error::{Error, Result};
use crate::rowset::RowSet;
use crate::MAX_SIZE;

/// A monotone triangle of size `n`.
///
/// Row `i` (1-based) holds `i` strictly increasing entries from `1..=n`,
/// adjacent rows interlace (`a(i,j) <= a(i-1,j) <= a(i,j+1)`), and the
/// bottom row is `1, 2, ..., n`. Entries are stored flat in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneTriangle {
    n: usize,
    entries: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

/// The two near-minimal triangles: `Top` raises the top entry to 2,
/// `Penultimate` replaces row `n - 1` by `1, ..., n - 2, n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearMinimal {
    Top,
    Penultimate,
}

#[inline]
pub(crate) fn row_offset(i: usize) -> usize {
    i * (i - 1) / 2
}

/// Validates a ragged array as a monotone triangle of size `n`.
///
/// Errors name the first offending position in reading order. At a given
/// position the checks run as: entry range (or bottom-row value), strict
/// increase towards the right neighbour, interlacing with the row above.
pub fn validate_triangle<R: AsRef<[i64]>>(n: usize, rows: &[R]) -> Result<MonotoneTriangle> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n > MAX_SIZE {
        return Err(Error::SizeTooLarge { n, max: MAX_SIZE });
    }
    if rows.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "expected {n} rows, found {}",
            rows.len()
        )));
    }
    for (k, row) in rows.iter().enumerate() {
        if row.as_ref().len() != k + 1 {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {} entries, expected {}",
                k + 1,
                row.as_ref().len(),
                k + 1
            )));
        }
    }
    let a = |i: usize, j: usize| rows[i - 1].as_ref()[j - 1];
    for i in 1..=n {
        for j in 1..=i {
            let v = a(i, j);
            if i == n {
                if v != j as i64 {
                    return Err(Error::BadBottomRow { col: j });
                }
            } else if v < 1 || v > n as i64 {
                return Err(Error::EntryOutOfRange {
                    row: i,
                    col: j,
                    value: v,
                    n,
                });
            }
            if j < i && v >= a(i, j + 1) {
                return Err(Error::StrictIncreaseViolated { row: i, col: j });
            }
            if i >= 2 && j < i && !(v <= a(i - 1, j) && a(i - 1, j) <= a(i, j + 1)) {
                return Err(Error::InterlacingViolated { row: i, col: j });
            }
        }
    }
    let entries = rows
        .iter()
        .flat_map(|r| r.as_ref().iter().map(|&v| v as u8))
        .collect();
    Ok(MonotoneTriangle { n, entries })
}

impl MonotoneTriangle {
    /// Validates `rows`, taking the size from the number of rows.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        validate_triangle(rows.len(), rows)
    }

    /// Builds a triangle from row bitmasks (bit `v - 1` set for value `v`).
    pub fn from_row_masks(n: usize, masks: &[u64]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = masks
            .iter()
            .map(|&m| {
                (0..64)
                    .filter(|b| m >> b & 1 == 1)
                    .map(|b| b as i64 + 1)
                    .collect()
            })
            .collect();
        validate_triangle(n, &rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `a(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(1 <= j && j <= i && i <= self.n);
        self.entries[row_offset(i) + j - 1] as usize
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[row_offset(i)..row_offset(i) + i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (1..=self.n).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.rows()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect()
    }

    /// Entries in reading order.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Row `i` as a value bitmask.
    pub fn row_mask(&self, i: usize) -> u64 {
        self.row(i).iter().fold(0, |m, &v| m | 1 << (v - 1))
    }

    pub fn row_masks(&self) -> Vec<u64> {
        (1..=self.n).map(|i| self.row_mask(i)).collect()
    }

    /// Entrywise combination of two same-size triangles. The caller is
    /// responsible for validating the result.
    pub(crate) fn zip_entries(&self, other: &Self, f: impl Fn(u8, u8) -> u8) -> Vec<u8> {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&x, &y)| f(x, y))
            .collect()
    }

    pub(crate) fn from_flat(n: usize, entries: &[u8]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = (1..=n)
            .map(|i| {
                entries[row_offset(i)..row_offset(i) + i]
                    .iter()
                    .map(|&v| v as i64)
                    .collect()
            })
            .collect();
        validate_triangle(n, &rows)
    }

    /// Rows `i` with `a(i, j) = j` for every `j`. Always contains `n`.
    pub fn distinguished_rows(&self) -> RowSet {
        let mut set = RowSet::empty(self.n);
        for i in 1..=self.n {
            // strictly increasing entries >= 1: the last one equals i iff the row is 1..i
            if self.get(i, i) == i {
                set.insert(i);
            }
        }
        set
    }

    /// Rows `i` equal to `n-i+1, ..., n`, the largest possible row.
    pub fn maximal_rows(&self) -> RowSet {
        let mut set = RowSet::empty(self.n);
        for i in 1..=self.n {
            if self.get(i, 1) == self.n - i + 1 {
                set.insert(i);
            }
        }
        set
    }

    /// True iff every row is contained in the next one, i.e. the triangle
    /// comes from a permutation.
    pub fn is_permutation_triangle(&self) -> bool {
        (1..self.n).all(|i| self.row_mask(i) & !self.row_mask(i + 1) == 0)
    }

    /// Maps every entry `v` to `n - v + 1` and reverses each row.
    pub fn rank_reverse(&self) -> MonotoneTriangle {
        let n = self.n;
        let mut entries = Vec::with_capacity(self.entries.len());
        for row in self.rows() {
            entries.extend(row.iter().rev().map(|&v| (n + 1 - v as usize) as u8));
        }
        let t = MonotoneTriangle { n, entries };
        debug_assert!(MonotoneTriangle::from_flat(n, &t.entries).is_ok());
        t
    }
}

/// `tau_min` (`a(i,j) = j`) or `tau_max` (`a(i,j) = n - i + j`).
pub fn extremal_triangle(n: usize, which: Extreme) -> Result<MonotoneTriangle> {
    let rows: Vec<Vec<i64>> = (1..=n)
        .map(|i| {
            (1..=i)
                .map(|j| match which {
                    Extreme::Min => j as i64,
                    Extreme::Max => (n - i + j) as i64,
                })
                .collect()
        })
        .collect();
    validate_triangle(n, &rows)
}

pub fn near_minimal_triangle(n: usize, which: NearMinimal) -> Result<MonotoneTriangle> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    let mut rows = extremal_triangle(n, Extreme::Min)?.to_rows();
    match which {
        NearMinimal::Top => rows[0][0] = 2,
        NearMinimal::Penultimate => rows[n - 2][n - 2] = n as i64,
    }
    validate_triangle(n, &rows)
}

impl fmt::Display for MonotoneTriangle {
    /// One line per row, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.rows().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}
