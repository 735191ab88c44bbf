//! Lexicographic enumeration of monotone triangles, completion counts,
//! ranking, unranking and exact uniform sampling.
//!
//! Rows are handled as value bitmasks. Interlacing only constrains adjacent
//! rows, so the number of ways to finish a triangle below a given row
//! depends on that row alone; every strictly increasing row can be finished.
//!
//! The canonical order is lexicographic on the reading sequence (rows top to
//! bottom, entries left to right). Rows within one level all have the same
//! length, so this is the depth-first order with children visited in
//! lexicographic order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::BigCount;
use crate::error::{Error, Result};
use crate::rowset::low_bits;
use crate::triangle::MonotoneTriangle;
use crate::Limits;

/// The next rows below `parent` in lexicographic order.
///
/// `parent == 0` stands for the empty row above the top; its children are
/// the single-entry rows `{1}, ..., {n}`.
pub fn interlacing_children(n: usize, parent: u64) -> Vec<u64> {
    let upper: Vec<usize> = (0..n)
        .filter(|b| parent >> b & 1 == 1)
        .map(|b| b + 1)
        .collect();
    let len = upper.len() + 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(
        n: usize,
        upper: &[usize],
        j: usize,
        prev: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<u64>,
    ) {
        let len = upper.len() + 1;
        if j == len {
            out.push(cur.iter().fold(0u64, |m, &v| m | 1 << (v - 1)));
            return;
        }
        let lo = (prev + 1).max(if j >= 1 { upper[j - 1] } else { 1 });
        let hi = if j < upper.len() { upper[j] } else { n };
        for v in lo..=hi {
            cur.push(v);
            rec(n, upper, j + 1, v, cur, out);
            cur.pop();
        }
    }
    rec(n, &upper, 0, 0, &mut cur, &mut out);
    out
}

/// A partially built triangle: the size, how many rows are fixed, and the
/// last fixed row (empty at level 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrianglePrefix {
    n: usize,
    level: usize,
    row: Vec<u8>,
}

impl TrianglePrefix {
    pub fn new(n: usize, row: &[usize]) -> Result<Self> {
        let level = row.len();
        if n == 0 {
            return Err(Error::SizeTooSmall { n, min: 1 });
        }
        if level > n {
            return Err(Error::ShapeMismatch(format!(
                "prefix row has {level} entries but n = {n}"
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            // strictly increasing values in 1..=n already satisfy j <= v <= n - level + j
            if v < 1 || v > n {
                return Err(Error::EntryOutOfRange {
                    row: level,
                    col: j + 1,
                    value: v as i64,
                    n,
                });
            }
            if j > 0 && row[j - 1] >= v {
                return Err(Error::StrictIncreaseViolated { row: level, col: j });
            }
        }
        Ok(TrianglePrefix {
            n,
            level,
            row: row.iter().map(|&v| v as u8).collect(),
        })
    }

    /// The prefix with nothing fixed.
    pub fn root(n: usize) -> Self {
        TrianglePrefix {
            n,
            level: 0,
            row: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn row(&self) -> &[u8] {
        &self.row
    }

    fn mask(&self) -> u64 {
        self.row.iter().fold(0, |m, &v| m | 1 << (v - 1))
    }
}

/// Children lists and completion counts for every row of one size `n`.
///
/// Built eagerly and immutable afterwards, so a table can be shared freely
/// between threads.
#[derive(Debug)]
pub struct CompletionTable {
    n: usize,
    children: Vec<Vec<u64>>,
    counts: Vec<BigCount>,
}

impl CompletionTable {
    fn build(n: usize) -> Self {
        let size = 1usize << n;
        let children: Vec<Vec<u64>> = (0..size as u64)
            .map(|m| {
                if (m.count_ones() as usize) < n {
                    interlacing_children(n, m)
                } else {
                    Vec::new()
                }
            })
            .collect();
        let mut counts = vec![BigUint::zero(); size];
        let mut by_level: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        for m in 0..size as u64 {
            by_level[m.count_ones() as usize].push(m);
        }
        counts[low_bits(n) as usize] = BigUint::one();
        for level in (0..n).rev() {
            for &m in &by_level[level] {
                let total = children[m as usize]
                    .iter()
                    .fold(BigUint::zero(), |acc, &c| acc + &counts[c as usize]);
                counts[m as usize] = total;
            }
        }
        CompletionTable {
            n,
            children,
            counts,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn children(&self, mask: u64) -> &[u64] {
        &self.children[mask as usize]
    }

    /// Completions below a row given as a bitmask (0 for the root).
    pub fn count(&self, mask: u64) -> &BigCount {
        &self.counts[mask as usize]
    }
}

static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CompletionTable>>>> = OnceLock::new();

/// The shared completion table for size `n`, built on first use.
pub fn completion_table(n: usize) -> Result<Arc<CompletionTable>> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    Limits::default().check_dp(n)?;
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&n) {
        return Ok(Arc::clone(t));
    }
    // build outside the lock; a racing builder produces an identical table
    let table = Arc::new(CompletionTable::build(n));
    let mut guard = tables.lock().unwrap();
    Ok(Arc::clone(guard.entry(n).or_insert(table)))
}

/// Number of ways to add rows `level+1, ..., n` below the prefix.
pub fn completions_count(prefix: &TrianglePrefix) -> Result<BigCount> {
    let table = completion_table(prefix.n)?;
    Ok(table.count(prefix.mask()).clone())
}

/// Streams every triangle of size `n` in lexicographic order.
pub fn enumerate_triangles(n: usize) -> Result<TriangleIter> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    Limits::default().check_enumeration(n)?;
    Ok(TriangleIter::new(n, None))
}

/// The triangles of size `n` whose top entry is `top`, in lexicographic
/// order. Concatenating these over `top = 1..=n` gives the full stream.
pub fn enumerate_with_top(n: usize, top: usize) -> Result<TriangleIter> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    Limits::default().check_enumeration(n)?;
    if top == 0 || top > n {
        return Err(Error::EntryOutOfRange {
            row: 1,
            col: 1,
            value: top as i64,
            n,
        });
    }
    Ok(TriangleIter::new(n, Some(top)))
}

/// Depth-first walk over row masks.
#[derive(Debug, Clone)]
pub struct MaskWalker {
    n: usize,
    // one frame per fixed row: candidate rows at that level and the index chosen
    stack: Vec<(Vec<u64>, usize)>,
    started: bool,
    done: bool,
}

impl MaskWalker {
    pub fn new(n: usize, top: Option<usize>) -> Self {
        let first = match top {
            Some(v) => vec![1u64 << (v - 1)],
            None => interlacing_children(n, 0),
        };
        MaskWalker {
            n,
            stack: vec![(first, 0)],
            started: false,
            done: false,
        }
    }

    fn descend(&mut self) {
        while self.stack.len() < self.n {
            let (cands, idx) = self.stack.last().unwrap();
            let kids = interlacing_children(self.n, cands[*idx]);
            self.stack.push((kids, 0));
        }
    }

    /// Advances and returns the row masks of the next triangle.
    pub fn next_masks(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend();
        } else {
            loop {
                let Some((cands, idx)) = self.stack.last_mut() else {
                    self.done = true;
                    return None;
                };
                if *idx + 1 < cands.len() {
                    *idx += 1;
                    break;
                }
                self.stack.pop();
            }
            self.descend();
        }
        Some(self.stack.iter().map(|(c, i)| c[*i]).collect())
    }
}

#[derive(Debug, Clone)]
pub struct TriangleIter {
    n: usize,
    walker: MaskWalker,
}

impl TriangleIter {
    fn new(n: usize, top: Option<usize>) -> Self {
        TriangleIter {
            n,
            walker: MaskWalker::new(n, top),
        }
    }
}

impl Iterator for TriangleIter {
    type Item = MonotoneTriangle;

    fn next(&mut self) -> Option<MonotoneTriangle> {
        let masks = self.walker.next_masks()?;
        Some(
            MonotoneTriangle::from_row_masks(self.n, &masks)
                .expect("enumerated rows always interlace"),
        )
    }
}

/// Position of `t` in the lexicographic enumeration of its size.
pub fn rank(t: &MonotoneTriangle) -> Result<BigCount> {
    let table = completion_table(t.n())?;
    let mut acc = BigUint::zero();
    let mut parent = 0u64;
    for row in t.row_masks() {
        for &c in table.children(parent) {
            if c == row {
                break;
            }
            acc += table.count(c);
        }
        parent = row;
    }
    Ok(acc)
}

/// Inverse of [`rank`]: the `k`-th triangle of size `n` (0-based).
pub fn unrank(n: usize, k: &BigCount) -> Result<MonotoneTriangle> {
    let table = completion_table(n)?;
    let total = table.count(0);
    if k >= total {
        return Err(Error::IndexOutOfRange {
            index: k.to_string(),
            count: total.to_string(),
        });
    }
    let mut k = k.clone();
    let mut parent = 0u64;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        parent = descend_by_index(&table, parent, &mut k);
        rows.push(parent);
    }
    MonotoneTriangle::from_row_masks(n, &rows)
}

/// Picks the child of `parent` whose block of completions contains `k`
/// and leaves the offset inside that block in `k`.
fn descend_by_index(table: &CompletionTable, parent: u64, k: &mut BigUint) -> u64 {
    for &c in table.children(parent) {
        let w = table.count(c);
        if *k < *w {
            return c;
        }
        *k -= w;
    }
    unreachable!("index exceeds completion count")
}

/// Uniform integer in `[0, bound)` by rejection on the bit length.
fn uniform_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero());
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let top_mask = if top_bits == 32 {
        u32::MAX
    } else {
        (1u32 << top_bits) - 1
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        digits[words - 1] &= top_mask;
        let candidate = BigUint::new(digits);
        if candidate < *bound {
            return candidate;
        }
    }
}

/// `count` independent uniform triangles of size `n`, deterministic in `seed`.
///
/// Each row is chosen among the children of the previous row with
/// probability proportional to its completion count.
pub fn sample_uniform(n: usize, count: usize, seed: u64) -> Result<Vec<MonotoneTriangle>> {
    let table = completion_table(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut parent = 0u64;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut k = uniform_below(&mut rng, table.count(parent));
            parent = descend_by_index(&table, parent, &mut k);
            rows.push(parent);
        }
        out.push(MonotoneTriangle::from_row_masks(n, &rows)?);
    }
    Ok(out)
}
