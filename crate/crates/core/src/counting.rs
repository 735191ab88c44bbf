//! Exact ASM numbers, the distinguished-row counts `eta_n`, and the
//! inequalities between them.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{ln_biguint, to_bigint};
use crate::rowset::RowSet;
use crate::Limits;

pub type BigCount = BigUint;

static ASM_CACHE: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `prod_{k<n} (3k+1)! / (n+k)!`, accumulated as one numerator and one
/// denominator. The individual factors are not integers.
fn asm_product_formula(n: usize) -> BigUint {
    let n = n as u64;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 0..n {
        num *= factorial(3 * k + 1);
        den *= factorial(n + k);
    }
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "A({n}) product formula left a remainder");
    q
}

/// The number of monotone triangles of size `n` (`A(0) = 1`).
///
/// Values are cached for the lifetime of the process; the cache only grows.
pub fn asm_number(n: usize) -> BigCount {
    {
        let cache = ASM_CACHE.read().unwrap();
        if let Some(v) = cache.get(n) {
            return v.clone();
        }
    }
    let mut cache = ASM_CACHE.write().unwrap();
    while cache.len() <= n {
        let k = cache.len();
        cache.push(asm_product_formula(k));
    }
    cache[n].clone()
}

/// `A(0..=n)` in one lock acquisition.
pub fn asm_numbers(n: usize) -> Vec<BigCount> {
    asm_number(n);
    ASM_CACHE.read().unwrap()[..=n].to_vec()
}

fn mask_values(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

/// `lower` (one entry shorter) interlaces `upper`:
/// `upper[j] <= lower[j] <= upper[j+1]`.
fn interlaces(lower: &[u32], upper: &[u32]) -> bool {
    lower
        .iter()
        .enumerate()
        .all(|(j, &x)| upper[j] <= x && x <= upper[j + 1])
}

/// Counts monotone triangles by a forward pass over rows: the number of
/// interlacing chains from the top row down to each candidate row, read off
/// at `1, 2, ..., n`.
pub fn asm_number_dp(n: usize) -> Result<BigCount> {
    asm_number_dp_with(n, &Limits::default())
}

pub fn asm_number_dp_with(n: usize, limits: &Limits) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    limits.check_dp(n)?;
    let by_size: Vec<Vec<u64>> = {
        let mut v = vec![Vec::new(); n + 1];
        for m in 1u64..(1 << n) {
            v[m.count_ones() as usize].push(m);
        }
        v
    };
    let mut level: Vec<(Vec<u32>, BigUint)> = by_size[1]
        .iter()
        .map(|&m| (mask_values(m), BigUint::one()))
        .collect();
    for masks in &by_size[2..=n] {
        let next: Vec<(Vec<u32>, BigUint)> = masks
            .iter()
            .map(|&m| {
                let upper = mask_values(m);
                let ways = level
                    .iter()
                    .filter(|(lower, _)| interlaces(lower, &upper))
                    .fold(BigUint::zero(), |acc, (_, w)| acc + w);
                (upper, ways)
            })
            .collect();
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|(_, w)| w)
        .next()
        .expect("exactly one row of size n"))
}

/// Number of triangles whose distinguished rows include `rows ∪ {n}`:
/// `A(i_1) A(i_2 - i_1) ... A(n - i_k)`.
pub fn eta(n: usize, rows: &RowSet) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    let mut prev = 0;
    let mut acc = BigUint::one();
    for r in rows.rows() {
        if r >= n {
            return Err(Error::RowOutOfRange {
                row: r,
                n,
                max: n - 1,
            });
        }
        acc *= asm_number(r - prev);
        prev = r;
    }
    Ok(acc * asm_number(n - prev))
}

/// Per-family outcome of [`lemma_margins`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarginFamily {
    pub checks: usize,
    /// Smallest margin seen; every margin is `>= 0` when the inequality holds.
    pub min_margin: Option<BigInt>,
    pub failures: Vec<String>,
}

impl MarginFamily {
    fn record(&mut self, margin: BigInt, what: impl FnOnce() -> String) {
        self.checks += 1;
        if margin.sign() == num_bigint::Sign::Minus {
            self.failures.push(what());
        }
        if self.min_margin.as_ref().is_none_or(|m| &margin < m) {
            self.min_margin = Some(margin);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub n_max: usize,
    /// `A(i1+1) A(i2-1) - A(i1) A(i2)` for `1 <= i2 <= i1 <= n_max`.
    pub increase: MarginFamily,
    /// `A(n) 2^e - A(n-c) 3^e` with `e = c(2n-c-1)/2`, for `c` in `1..=n`.
    pub ratio: MarginFamily,
    /// `A(n-|I|) - eta_n(I)` over subsets `I` of `[n-1]`.
    pub corollary: MarginFamily,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.increase.passed() && self.ratio.passed() && self.corollary.passed()
    }

    pub fn checks(&self) -> usize {
        self.increase.checks + self.ratio.checks + self.corollary.checks
    }
}

/// Above this many candidate rows the corollary family is sampled instead of
/// checked over every subset.
const COROLLARY_EXHAUSTIVE_ROWS: usize = 12;
const COROLLARY_SAMPLES: usize = 256;
const COROLLARY_SEED: u64 = 0x5eed_c0de;

pub fn lemma_margins(n_max: usize) -> Result<LemmaReport> {
    if n_max < 2 {
        return Err(Error::SizeTooSmall { n: n_max, min: 2 });
    }
    let a: Vec<BigInt> = asm_numbers(n_max + 1).iter().map(to_bigint).collect();
    let mut report = LemmaReport {
        n_max,
        ..Default::default()
    };

    for i1 in 1..=n_max {
        for i2 in 1..=i1 {
            let margin = &a[i1 + 1] * &a[i2 - 1] - &a[i1] * &a[i2];
            report
                .increase
                .record(margin, || format!("increase (i1={i1}, i2={i2})"));
        }
    }

    let two = BigInt::from(2);
    let three = BigInt::from(3);
    for n in 1..=n_max {
        for c in 1..=n {
            let e = (c * (2 * n - c - 1) / 2) as u64;
            let margin = &a[n] * Pow::pow(&two, e) - &a[n - c] * Pow::pow(&three, e);
            report
                .ratio
                .record(margin, || format!("ratio (n={n}, c={c})"));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(COROLLARY_SEED);
    for n in 2..=n_max {
        let rows = n - 1;
        let masks: Vec<u64> = if rows <= COROLLARY_EXHAUSTIVE_ROWS {
            (0..1u64 << rows).collect()
        } else {
            let full = (1u64 << rows) - 1;
            let mut v = vec![0, full];
            for k in 1..rows {
                v.push((1u64 << k) - 1); // top k rows
                v.push(full & !((1u64 << (rows - k)) - 1)); // rows n-k..n-1
            }
            v.extend((0..COROLLARY_SAMPLES).map(|_| rng.gen::<u64>() & full));
            v
        };
        for mask in masks {
            let set = RowSet::from_mask(n, mask)?;
            let k = set.len();
            let margin = &a[n - k] - to_bigint(&eta(n, &set)?);
            report
                .corollary
                .record(margin, || format!("corollary (n={n}, I={set})"));
        }
    }
    Ok(report)
}

/// `A(n) / ((3 sqrt 3 / 4)^{n^2} n^{-5/36})`, evaluated in log space from the
/// exact `A(n)`. Tends to the unknown leading constant as `n` grows.
pub fn bleher_fokin_estimate(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    let base = (3.0 * 3f64.sqrt() / 4.0).ln();
    let nf = n as f64;
    Ok((ln_biguint(&asm_number(n)) - nf * nf * base + (5.0 / 36.0) * nf.ln()).exp())
}
