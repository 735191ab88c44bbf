//! Exact counts of `r`-tuples with trivial meet.
//!
//! A tuple has meet `tau_min` exactly when every row is distinguished in at
//! least one member. Writing `g(T)` for the number of triangles with no
//! distinguished row in `T`, inclusion-exclusion over `T ⊆ [n-1]` gives
//!
//! ```text
//! N_min(n, r) = sum_T (-1)^|T| g(T)^r
//! ```
//!
//! and `g(T)` itself is an alternating sum of the gap products `eta_n(U)`
//! over `U ⊆ T`, which collapses to a quadratic recurrence in `|T|`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;

use crate::census::{build_census, build_census_with, CensusKey, CensusTable, RunHistogram};
use crate::counting::{asm_number, asm_numbers, BigCount};
use crate::enumeration::enumerate_triangles;
use crate::error::{Error, Result};
use crate::lattice::{is_trivial, LatticeOp};
use crate::numeric::{ratio, ratio_u, to_bigint};
use crate::rowset::{max_consecutive_run, RowSet};
use crate::triangle::{near_minimal_triangle, Extreme, MonotoneTriangle, NearMinimal};
use crate::{with_workers, Limits};

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SizeTooSmall { n, min: 1 });
    }
    if n > crate::MAX_SIZE {
        return Err(Error::SizeTooLarge {
            n,
            max: crate::MAX_SIZE,
        });
    }
    Ok(())
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::SizeTooSmall { n: r, min: 1 });
    }
    Ok(())
}

/// `g(T)` from precomputed `A(0..=n)`, `T` given as a row bitmask.
fn avoid_count_masked(n: usize, t: u64, a: &[BigInt]) -> BigInt {
    let rows: Vec<usize> = (0..n - 1)
        .filter(|b| t >> b & 1 == 1)
        .map(|b| b + 1)
        .collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(rows.len());
    let mut g = a[n].clone();
    for &tj in &rows {
        let mut sj = -a[tj].clone();
        for (i, si) in s.iter().enumerate() {
            sj -= si * &a[tj - rows[i]];
        }
        g += &sj * &a[n - tj];
        s.push(sj);
    }
    g
}

/// Number of triangles of size `n` with no distinguished row in `t_set`.
pub fn avoid_count(n: usize, t_set: &RowSet) -> Result<BigCount> {
    check_size(n)?;
    if let Some(row) = t_set.rows().find(|&r| r >= n) {
        return Err(Error::RowOutOfRange { row, n, max: n - 1 });
    }
    let a: Vec<BigInt> = asm_numbers(n).iter().map(to_bigint).collect();
    let g = avoid_count_masked(n, t_set.mask(), &a);
    Ok(g.to_biguint().expect("avoid counts are nonnegative"))
}

/// `sum_{T ⊆ [n-1]} (-1)^|T| g(T)^r`, split across `workers` by mask range.
fn inclusion_exclusion<G>(n: usize, r: usize, workers: usize, g: G) -> BigInt
where
    G: Fn(u64) -> BigInt + Sync,
{
    let subsets = 1u64 << (n - 1);
    let term = |t: u64| {
        let v: BigInt = Pow::pow(g(t), r as u32);
        if t.count_ones() % 2 == 1 {
            -v
        } else {
            v
        }
    };
    if workers <= 1 {
        return (0..subsets).map(term).sum();
    }
    let chunk = subsets.div_ceil(workers as u64 * 8).max(1);
    with_workers(workers, || {
        (0..subsets.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let lo = c * chunk;
                let hi = (lo + chunk).min(subsets);
                (lo..hi).map(term).sum::<BigInt>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    })
}

fn into_count(v: BigInt) -> BigCount {
    v.to_biguint().expect("tuple counts are nonnegative")
}

/// Number of `r`-tuples in `M_n^r` whose meet is `tau_min`.
pub fn n_min_exact(n: usize, r: usize) -> Result<BigCount> {
    n_min_exact_with(n, r, &Limits::default(), 1)
}

pub fn n_min_exact_with(n: usize, r: usize, limits: &Limits, workers: usize) -> Result<BigCount> {
    check_size(n)?;
    check_r(r)?;
    limits.check_inclusion_exclusion(n)?;
    let a: Vec<BigInt> = asm_numbers(n).iter().map(to_bigint).collect();
    Ok(into_count(inclusion_exclusion(n, r, workers, |t| {
        avoid_count_masked(n, t, &a)
    })))
}

/// The same inclusion-exclusion with `g(T)` read off a census.
pub fn n_min_from_census(census: &CensusTable, r: usize) -> Result<BigCount> {
    check_r(r)?;
    let n = census.n();
    Ok(into_count(inclusion_exclusion(n, r, 1, |t| {
        to_bigint(&census.avoiding(t))
    })))
}

/// Direct count over all `A(n)^r` tuples using the lattice meet.
pub fn n_min_direct(n: usize, r: usize) -> Result<BigCount> {
    check_r(r)?;
    let all: Vec<MonotoneTriangle> = enumerate_triangles(n)?.collect();
    let mut idx = vec![0usize; r];
    let mut count = 0u64;
    let mut tuple: Vec<MonotoneTriangle> = vec![all[0].clone(); r];
    loop {
        for (slot, &i) in tuple.iter_mut().zip(&idx) {
            *slot = all[i].clone();
        }
        if is_trivial(&tuple, LatticeOp::Meet)? {
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(BigUint::from(count));
            }
            idx[pos] += 1;
            if idx[pos] < all.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Trivial-meet count from the exhaustive census. For `n <= 4, r <= 3` the
/// direct tuple loop is also run and must agree.
pub fn n_min_census(n: usize, r: usize) -> Result<BigCount> {
    check_size(n)?;
    let census = build_census(n)?;
    let via_census = n_min_from_census(&census, r)?;
    if n <= 4 && r <= 3 {
        let direct = n_min_direct(n, r)?;
        assert_eq!(
            via_census, direct,
            "census and direct counts disagree at n={n}, r={r}"
        );
    }
    Ok(via_census)
}

/// `p_min` or `p_max` as an exact reduced fraction.
///
/// The minimum side uses the gap-product inclusion-exclusion. The maximum
/// side enumerates every triangle, rank-reverses it, and runs the meet
/// census on the reversed distinguished-row sets: a row of `t` is maximal
/// exactly when the same row of its reversal is distinguished.
pub fn p_extreme(n: usize, r: usize, which: Extreme) -> Result<BigRational> {
    let count = match which {
        Extreme::Min => n_min_exact(n, r)?,
        Extreme::Max => {
            check_r(r)?;
            let reversed = build_census_with(n, CensusKey::RankReversed, 1)?;
            n_min_from_census(&reversed, r)?
        }
    };
    let total: BigUint = Pow::pow(asm_number(n), r as u32);
    Ok(ratio_u(&count, &total))
}

/// Label of a class of trivial-meet tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    /// Some member's longest distinguished block has exactly this length.
    Exact(usize),
    /// Every member's longest distinguished block is at most this long.
    AtMost(usize),
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassLabel::Exact(l) => write!(f, "C_{l}"),
            ClassLabel::AtMost(l) => write!(f, "C_<={l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSizes {
    pub n: usize,
    pub r: usize,
    /// `C_n, C_{n-1}, ...` down to `C_{max(n-6r, 1)}`, then `C_{<= n-6r-1}`
    /// when that bound is positive. Classes overlap.
    pub sizes: BTreeMap<ClassLabel, BigCount>,
    /// Total number of trivial-meet tuples.
    pub total: BigCount,
}

impl ClassSizes {
    /// Labels from the largest block down.
    pub fn labels(&self) -> Vec<ClassLabel> {
        let mut v: Vec<ClassLabel> = self.sizes.keys().copied().collect();
        v.sort_by_key(|l| match *l {
            ClassLabel::Exact(k) => (0, usize::MAX - k),
            ClassLabel::AtMost(k) => (1, usize::MAX - k),
        });
        v
    }

    pub fn get(&self, label: ClassLabel) -> Option<&BigCount> {
        self.sizes.get(&label)
    }

    /// `r A(n)^{r-1}`, the bound on `C_n`.
    pub fn full_block_bound(&self) -> BigCount {
        BigUint::from(self.r) * Pow::pow(asm_number(self.n), (self.r - 1) as u32)
    }

    /// `r (r-1) A(n-1) A(n)^{r-2}`, the bound on `C_{n-1}`; `None` for `r = 1`.
    pub fn near_full_block_bound(&self) -> Option<BigCount> {
        (self.r >= 2).then(|| {
            BigUint::from(self.r * (self.r - 1))
                * asm_number(self.n - 1)
                * Pow::pow(asm_number(self.n), (self.r - 2) as u32)
        })
    }

    /// `r (r-1)^2 i A(i+1) A(i) A(n-i+1) A(n)^{r-2}`, the bound on `C_{n-i}`
    /// for `2 <= i <= 6r`; `None` outside that range.
    pub fn small_class_bound(&self, i: usize) -> Option<BigCount> {
        let (n, r) = (self.n, self.r);
        if r < 2 || i < 2 || i > 6 * r || i >= n {
            return None;
        }
        Some(
            BigUint::from(r * (r - 1) * (r - 1) * i)
                * asm_number(i + 1)
                * asm_number(i)
                * asm_number(n - i + 1)
                * Pow::pow(asm_number(n), (r - 2) as u32),
        )
    }
}

pub fn class_sizes(n: usize, r: usize) -> Result<ClassSizes> {
    check_size(n)?;
    check_r(r)?;
    let census = build_census(n)?;
    let total = n_min_from_census(&census, r)?;
    let mut sizes = BTreeMap::new();
    let lowest_exact = n.saturating_sub(6 * r).max(1);
    for len in (lowest_exact..=n).rev() {
        let without = census.filtered(|k| max_consecutive_run(k) != len);
        let missing = n_min_from_census(&without, r)?;
        sizes.insert(ClassLabel::Exact(len), &total - missing);
    }
    if n > 6 * r + 1 {
        let cap = n - 6 * r - 1;
        let within = census.filtered(|k| max_consecutive_run(k) <= cap);
        sizes.insert(ClassLabel::AtMost(cap), n_min_from_census(&within, r)?);
    }
    Ok(ClassSizes { n, r, sizes, total })
}

/// Max-run histogram plus the check that runs `n, n-1, n-2` occur exactly
/// `1, 1, 6` times and runs `<= n-3` exactly `A(n) - 8` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub histogram: RunHistogram,
    pub top_counts: [BigCount; 3],
    pub at_most_n_minus_3: BigCount,
    pub matches_block_claim: bool,
    /// Both near-minimal triangles have a longest block above `n - 3`.
    pub near_minimal_above: bool,
}

pub fn run_histogram_report(n: usize) -> Result<BlockReport> {
    check_size(n)?;
    let histogram = build_census(n)?.run_histogram();
    let at = |l: usize| histogram.counts.get(&l).cloned().unwrap_or_default();
    let top_counts = [
        at(n),
        if n >= 1 { at(n - 1) } else { BigUint::zero() },
        if n >= 2 { at(n - 2) } else { BigUint::zero() },
    ];
    let at_most_n_minus_3: BigCount = histogram
        .counts
        .iter()
        .filter(|(&l, _)| l + 3 <= n)
        .map(|(_, v)| v)
        .sum();
    let expected_rest = to_bigint(&asm_number(n)) - BigInt::from(8);
    let matches_block_claim = top_counts == [1u32, 1, 6].map(BigUint::from)
        && to_bigint(&at_most_n_minus_3) == expected_rest;
    let near_minimal_above = n >= 2
        && [NearMinimal::Top, NearMinimal::Penultimate]
            .iter()
            .all(|&w| {
                near_minimal_triangle(n, w)
                    .map(|t| t.distinguished_rows().max_consecutive_run() + 3 > n)
                    .unwrap_or(false)
            });
    Ok(BlockReport {
        histogram,
        top_counts,
        at_most_n_minus_3,
        matches_block_claim,
        near_minimal_above,
    })
}

/// Exact trivial-meet statistics for one `(n, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetCensusReport {
    pub n: usize,
    pub r: usize,
    pub n_min: BigCount,
    pub p_min: BigRational,
    /// `p_min A(n) / r`; tends to 1.
    pub ratio_to_leading: BigRational,
    /// `r A(n)^{r-1}` (1 when `r = 1`).
    pub main_term: BigCount,
    /// `2 r (r-1) A(n-1) A(n)^{r-2}` (0 when `r = 1`).
    pub second_term: BigCount,
    /// `n_min - main - second`.
    pub error_term: BigInt,
    /// `error / (A(n-2) A(n)^{r-2})`; `None` for `n < 2`.
    pub theta_ratio: Option<BigRational>,
}

impl MeetCensusReport {
    pub fn decomposition_holds(&self) -> bool {
        to_bigint(&self.main_term) + to_bigint(&self.second_term) + &self.error_term
            == to_bigint(&self.n_min)
    }
}

pub fn meet_census_report(n: usize, r: usize) -> Result<MeetCensusReport> {
    meet_census_report_with(n, r, 1)
}

pub fn meet_census_report_with(n: usize, r: usize, workers: usize) -> Result<MeetCensusReport> {
    let n_min = n_min_exact_with(n, r, &Limits::default(), workers)?;
    let a_n = asm_number(n);
    let total: BigUint = Pow::pow(&a_n, r as u32);
    let p_min = ratio_u(&n_min, &total);
    let ratio_to_leading = &p_min * ratio(to_bigint(&a_n), BigInt::from(r));

    let (main_term, second_term) = if r == 1 {
        (BigUint::one(), BigUint::zero())
    } else {
        let pow_r2: BigUint = Pow::pow(&a_n, (r - 2) as u32);
        (
            BigUint::from(r) * &pow_r2 * &a_n,
            BigUint::from(2 * r * (r - 1)) * asm_number(n - 1) * &pow_r2,
        )
    };
    let error_term = to_bigint(&n_min) - to_bigint(&main_term) - to_bigint(&second_term);
    let theta_ratio = (n >= 2).then(|| {
        let a_n2 = to_bigint(&asm_number(n - 2));
        if r >= 2 {
            let scale = a_n2 * to_bigint(&Pow::pow(&a_n, (r - 2) as u32));
            ratio(error_term.clone(), scale)
        } else {
            // A(n)^{-1} scale
            ratio(&error_term * to_bigint(&a_n), a_n2)
        }
    });
    Ok(MeetCensusReport {
        n,
        r,
        n_min,
        p_min,
        ratio_to_leading,
        main_term,
        second_term,
        error_term,
        theta_ratio,
    })
}

/// One report per `n` in `1..=n_max`.
pub fn theorem_report(n_max: usize, r: usize) -> Result<Vec<MeetCensusReport>> {
    theorem_report_with(n_max, r, 1)
}

pub fn theorem_report_with(
    n_max: usize,
    r: usize,
    workers: usize,
) -> Result<Vec<MeetCensusReport>> {
    check_size(n_max)?;
    check_r(r)?;
    Limits::default().check_inclusion_exclusion(n_max)?;
    (1..=n_max)
        .map(|n| meet_census_report_with(n, r, workers))
        .collect()
}

/// `|ratio - 1|` for the leading-order ratio of a report.
pub fn leading_deviation(report: &MeetCensusReport) -> BigRational {
    (&report.ratio_to_leading - BigRational::one()).abs()
}

/// Sign of the error term, as `-1`, `0` or `1`.
pub fn error_sign(report: &MeetCensusReport) -> i8 {
    match report.error_term.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn avoid_counts() {
        assert_eq!(avoid_count(3, &RowSet::empty(3)).unwrap(), u(7));
        assert_eq!(
            avoid_count(3, &RowSet::from_rows(3, [1]).unwrap()).unwrap(),
            u(5)
        );
        assert_eq!(
            avoid_count(3, &RowSet::from_rows(3, [1, 2]).unwrap()).unwrap(),
            u(4)
        );
        assert!(matches!(
            avoid_count(3, &RowSet::from_rows(3, [3]).unwrap()),
            Err(Error::RowOutOfRange { row: 3, .. })
        ));
    }

    #[test]
    fn spot_values() {
        assert_eq!(n_min_exact(2, 2).unwrap(), u(3));
        assert_eq!(n_min_exact(3, 2).unwrap(), u(15));
        for n in 1..=8 {
            assert_eq!(n_min_exact(n, 1).unwrap(), u(1));
        }
        for r in 1..=3 {
            assert_eq!(n_min_census(1, r).unwrap(), u(1));
        }
        assert_eq!(n_min_census(3, 2).unwrap(), u(15));
        assert_eq!(n_min_direct(3, 2).unwrap(), u(15));
        assert!(n_min_exact(19, 2).is_err());
        assert!(n_min_exact(3, 0).is_err());
    }

    #[test]
    fn probabilities() {
        let p = p_extreme(3, 2, Extreme::Min).unwrap();
        assert_eq!(p, ratio(BigInt::from(15), BigInt::from(49)));
        for n in 1..=6 {
            assert_eq!(
                p_extreme(n, 1, Extreme::Min).unwrap(),
                ratio(BigInt::one(), to_bigint(&asm_number(n)))
            );
        }
        assert_eq!(
            p_extreme(4, 2, Extreme::Max).unwrap(),
            p_extreme(4, 2, Extreme::Min).unwrap()
        );
    }

    #[test]
    fn classes_small() {
        let c = class_sizes(3, 2).unwrap();
        assert_eq!(c.get(ClassLabel::Exact(3)), Some(&u(13)));
        assert_eq!(c.get(ClassLabel::Exact(2)), Some(&u(4)));
        assert_eq!(c.get(ClassLabel::Exact(1)), Some(&u(12)));
        assert_eq!(c.full_block_bound(), u(14));
        assert_eq!(c.total, u(15));
        assert!(c.get(ClassLabel::AtMost(0)).is_none());
    }

    #[test]
    fn block_counts() {
        let r3 = run_histogram_report(3).unwrap();
        assert_eq!(r3.top_counts, [u(1), u(1), u(5)]);
        assert!(!r3.matches_block_claim);
        for n in 4..=6 {
            let r = run_histogram_report(n).unwrap();
            assert!(r.matches_block_claim, "n = {n}");
            assert!(r.near_minimal_above);
        }
    }

    #[test]
    fn report_small() {
        let rep = meet_census_report(3, 2).unwrap();
        assert_eq!(rep.main_term, u(14));
        assert_eq!(rep.second_term, u(8));
        assert_eq!(rep.error_term, BigInt::from(-7));
        assert_eq!(
            rep.ratio_to_leading,
            ratio(BigInt::from(15), BigInt::from(14))
        );
        assert_eq!(
            rep.theta_ratio,
            Some(ratio(BigInt::from(-7), BigInt::one()))
        );
        assert!(rep.decomposition_holds());
        let one = meet_census_report(5, 1).unwrap();
        assert_eq!(one.main_term, u(1));
        assert_eq!(one.error_term, BigInt::zero());
        assert_eq!(one.p_min, ratio(BigInt::one(), BigInt::from(429)));
        assert!(meet_census_report(1, 2).unwrap().theta_ratio.is_none());
    }

    #[test]
    fn parallel_matches_sequential() {
        for n in 1..=10 {
            assert_eq!(
                n_min_exact_with(n, 3, &Limits::default(), 4).unwrap(),
                n_min_exact(n, 3).unwrap()
            );
        }
    }
}
