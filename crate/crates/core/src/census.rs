//! Exact distinguished-row census of all triangles of one size, its
//! on-disk format, and the max-run histogram derived from it.
//!
//! File format, one key per line after the header, ascending bitmask:
//!
//! ```text
//! MTCENSUS v1 n=3 total=7
//! 4 4
//! 5 1
//! 6 1
//! 7 1
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::counting::{asm_number, BigCount};
use crate::enumeration::MaskWalker;
use crate::error::{Error, Result};
use crate::rowset::{low_bits, max_consecutive_run, RowSet};
use crate::triangle::MonotoneTriangle;
use crate::{with_workers, Limits};

pub const CACHE_ENV: &str = "GOG_CACHE_DIR";
const HEADER_TAG: &str = "MTCENSUS v1";

/// Number of triangles whose distinguished-row set is exactly each key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    n: usize,
    counts: BTreeMap<u64, BigCount>,
}

/// Number of triangles by the length of their longest block of consecutive
/// distinguished rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunHistogram {
    pub n: usize,
    pub counts: BTreeMap<usize, BigCount>,
}

/// Which row set of each triangle keys the census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusKey {
    Distinguished,
    /// Distinguished rows of the rank-reversed triangle, i.e. the rows that
    /// are as large as possible in the original.
    RankReversed,
}

fn distinguished_mask(rows: &[u64]) -> u64 {
    rows.iter()
        .enumerate()
        .filter(|(i, &m)| m == low_bits(i + 1))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn count_partition(n: usize, top: usize, key: CensusKey) -> BTreeMap<u64, u64> {
    let mut walker = MaskWalker::new(n, Some(top));
    let mut local = BTreeMap::new();
    while let Some(rows) = walker.next_masks() {
        let k = match key {
            CensusKey::Distinguished => distinguished_mask(&rows),
            CensusKey::RankReversed => MonotoneTriangle::from_row_masks(n, &rows)
                .expect("enumerated rows always interlace")
                .rank_reverse()
                .distinguished_rows()
                .mask(),
        };
        *local.entry(k).or_insert(0u64) += 1;
    }
    local
}

pub fn build_census(n: usize) -> Result<CensusTable> {
    build_census_with(n, CensusKey::Distinguished, 1)
}

/// Builds a census by exhaustive enumeration, split by top entry across
/// `workers` threads.
pub fn build_census_with(n: usize, key: CensusKey, workers: usize) -> Result<CensusTable> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    Limits::default().check_enumeration(n)?;
    let parts: Vec<BTreeMap<u64, u64>> = with_workers(workers, || {
        (1..=n)
            .into_par_iter()
            .map(|top| count_partition(n, top, key))
            .collect()
    });
    let mut counts: BTreeMap<u64, BigCount> = BTreeMap::new();
    for part in parts {
        for (k, v) in part {
            *counts.entry(k).or_default() += v;
        }
    }
    let table = CensusTable { n, counts };
    debug_assert_eq!(table.total(), asm_number(n));
    Ok(table)
}

impl CensusTable {
    /// Builds a table from explicit counts, dropping zeros and checking that
    /// every key contains row `n` and the counts sum to `A(n)`.
    pub fn from_counts(n: usize, counts: BTreeMap<u64, BigCount>) -> Result<Self> {
        let counts: BTreeMap<u64, BigCount> =
            counts.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for &k in counts.keys() {
            RowSet::from_mask(n, k)?;
            if k >> (n - 1) & 1 == 0 {
                return Err(Error::ShapeMismatch(format!(
                    "census key {k:x} does not contain row {n}"
                )));
            }
        }
        let table = CensusTable { n, counts };
        if table.total() != asm_number(n) {
            return Err(Error::ShapeMismatch(format!(
                "census counts sum to {}, expected A({n}) = {}",
                table.total(),
                asm_number(n)
            )));
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<u64, BigCount> {
        &self.counts
    }

    pub fn get(&self, set: &RowSet) -> BigCount {
        self.counts.get(&set.mask()).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigCount {
        self.counts.values().sum()
    }

    /// Triangles whose distinguished set contains `rows ∪ {n}`.
    pub fn containing(&self, rows: &RowSet) -> BigCount {
        let need = rows.mask() | 1 << (self.n - 1);
        self.counts
            .iter()
            .filter(|(&k, _)| k & need == need)
            .map(|(_, v)| v)
            .sum()
    }

    /// Triangles whose distinguished set misses every row of `rows`.
    pub fn avoiding(&self, rows: u64) -> BigCount {
        self.counts
            .iter()
            .filter(|(&k, _)| k & rows == 0)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn run_histogram(&self) -> RunHistogram {
        let mut counts: BTreeMap<usize, BigCount> = BTreeMap::new();
        for (&k, v) in &self.counts {
            *counts.entry(max_consecutive_run(k)).or_default() += v;
        }
        RunHistogram { n: self.n, counts }
    }

    /// The census restricted to keys accepted by `keep`. The result is not a
    /// full census, so it skips the total check.
    pub fn filtered(&self, keep: impl Fn(u64) -> bool) -> CensusTable {
        CensusTable {
            n: self.n,
            counts: self
                .counts
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{HEADER_TAG} n={} total={}\n", self.n, self.total());
        for (k, v) in &self.counts {
            s.push_str(&format!("{k:x} {v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or_default();
        let err = |line: usize, detail: String| Error::Parse { line, detail };
        let rest = header
            .strip_prefix(HEADER_TAG)
            .and_then(|r| r.strip_prefix(" n="))
            .ok_or_else(|| err(1, format!("bad header {header:?}")))?;
        let (n_str, total_str) = rest
            .split_once(" total=")
            .ok_or_else(|| err(1, format!("bad header {header:?}")))?;
        let n: usize = n_str
            .parse()
            .map_err(|_| err(1, format!("bad size {n_str:?}")))?;
        if n == 0 || n > crate::MAX_SIZE {
            return Err(err(1, format!("size {n} out of range")));
        }
        let total: BigUint = total_str
            .parse()
            .map_err(|_| err(1, format!("bad total {total_str:?}")))?;

        let body: Vec<&str> = lines.collect();
        if body.last() != Some(&"") {
            return Err(err(body.len() + 1, "missing final newline".into()));
        }
        let mut counts = BTreeMap::new();
        let mut prev: Option<u64> = None;
        for (idx, line) in body[..body.len() - 1].iter().enumerate() {
            let ln = idx + 2;
            let (k, v) = line
                .split_once(' ')
                .ok_or_else(|| err(ln, format!("expected `<hex> <count>`, got {line:?}")))?;
            let key = u64::from_str_radix(k, 16).map_err(|_| err(ln, format!("bad key {k:?}")))?;
            if prev.is_some_and(|p| p >= key) {
                return Err(err(ln, "keys must be strictly ascending".into()));
            }
            prev = Some(key);
            let value: BigUint = v.parse().map_err(|_| err(ln, format!("bad count {v:?}")))?;
            counts.insert(key, value);
        }
        let table = CensusTable::from_counts(n, counts)?;
        if table.total() != total {
            return Err(err(
                1,
                format!("header total {total} disagrees with counts"),
            ));
        }
        Ok(table)
    }
}

/// Cache directory: explicit flag, then `$GOG_CACHE_DIR`, then `.cache/`.
pub fn resolve_cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(".cache"),
    }
}

pub fn census_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("census-n{n}.txt"))
}

/// Reads the cached census for `n` from `dir`, building and writing it on
/// a miss.
pub fn load_or_build_census(n: usize, dir: &Path, workers: usize) -> Result<CensusTable> {
    let path = census_path(dir, n);
    if let Ok(text) = fs::read_to_string(&path) {
        let table = CensusTable::parse(&text)?;
        if table.n() == n {
            return Ok(table);
        }
    }
    let table = build_census_with(n, CensusKey::Distinguished, workers)?;
    fs::create_dir_all(dir)?;
    fs::write(&path, table.to_text())?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_three() {
        let c = build_census(3).unwrap();
        let expect: BTreeMap<u64, BigCount> = [(0b100, 4u32), (0b101, 1), (0b110, 1), (0b111, 1)]
            .into_iter()
            .map(|(k, v)| (k, BigUint::from(v)))
            .collect();
        assert_eq!(c.counts(), &expect);
        assert_eq!(c.to_text(), "MTCENSUS v1 n=3 total=7\n4 4\n5 1\n6 1\n7 1\n");
        let h = c.run_histogram();
        let expect_h: BTreeMap<usize, BigCount> = [(1, 5u32), (2, 1), (3, 1)]
            .into_iter()
            .map(|(k, v)| (k, BigUint::from(v)))
            .collect();
        assert_eq!(h.counts, expect_h);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let c = build_census(5).unwrap();
        assert_eq!(CensusTable::parse(&c.to_text()).unwrap(), c);
        assert!(CensusTable::parse("MTCENSUS v1 n=3 total=7\n4 4\n5 1\n6 1\n7 1").is_err());
        assert!(CensusTable::parse("MTCENSUS v1 n=3 total=8\n4 4\n5 1\n6 1\n7 1\n").is_err());
        assert!(CensusTable::parse("MTCENSUS v1 n=3 total=7\n5 1\n4 4\n6 1\n7 1\n").is_err());
        assert!(CensusTable::parse("MTCENSUS v1 n=3 total=7\n3 4\n5 1\n6 1\n7 1\n").is_err());
        assert!(CensusTable::parse("CENSUS n=3\n").is_err());
    }

    #[test]
    fn parallel_build_matches() {
        for n in 1..=6 {
            assert_eq!(
                build_census_with(n, CensusKey::Distinguished, 3).unwrap(),
                build_census(n).unwrap()
            );
        }
    }

    #[test]
    fn rank_reversed_census_equals_original() {
        for n in 1..=6 {
            assert_eq!(
                build_census_with(n, CensusKey::RankReversed, 1).unwrap(),
                build_census(n).unwrap()
            );
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let built = load_or_build_census(4, dir.path(), 1).unwrap();
        assert!(census_path(dir.path(), 4).exists());
        let loaded = load_or_build_census(4, dir.path(), 1).unwrap();
        assert_eq!(built, loaded);
        assert_eq!(
            resolve_cache_dir(Some(Path::new("/x/y"))),
            PathBuf::from("/x/y")
        );
    }
}
