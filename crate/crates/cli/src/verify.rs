//! Invariant suites behind `gog verify`.

use std::fmt::Display;

use clap::ValueEnum;
use num_bigint::BigUint;
use num_traits::Pow;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gog_core::census::{build_census, build_census_with, CensusKey, CensusTable};
use gog_core::counting::{asm_number, asm_number_dp, eta, lemma_margins};
use gog_core::enumeration::{enumerate_triangles, rank, unrank};
use gog_core::lattice::{compare, is_trivial, join2, le, meet2};
use gog_core::meet_census::{
    meet_census_report, n_min_from_census, p_extreme, run_histogram_report,
};
use gog_core::triangle::{extremal_triangle, Extreme};
use gog_core::{
    from_asm, from_column_sum, perm_to_triangle, to_asm, to_column_sum, AlternatingSignMatrix,
    ColumnSumMatrix, Error, LatticeOp, MonotoneTriangle, OrderRelation, Permutation, Result,
    RowSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bijections,
    Lattice,
    Lemmas,
    Census,
    Theorems,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Bijections => "bijections",
            Suite::Lattice => "lattice",
            Suite::Lemmas => "lemmas",
            Suite::Census => "census",
            Suite::Theorems => "theorems",
            Suite::All => "all",
        }
    }

    /// Largest accepted `n_max`.
    pub fn limit(self) -> usize {
        match self {
            Suite::Bijections | Suite::Census => 7,
            Suite::Lattice => 6,
            Suite::Lemmas => 40,
            Suite::Theorems => 6,
            Suite::All => 6,
        }
    }

    fn components(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Bijections,
                Suite::Lattice,
                Suite::Lemmas,
                Suite::Census,
                Suite::Theorems,
            ],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(suite: Suite) -> Self {
        SuiteResult {
            suite,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn expect_eq<T: PartialEq + Display>(
        &mut self,
        got: T,
        want: T,
        what: impl FnOnce() -> String,
    ) {
        let ok = got == want;
        self.check(ok, || format!("{}: got {got}, expected {want}", what()));
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary_line(&self) -> String {
        match &self.first_failure {
            None => format!("OK {} checks={}", self.suite.name(), self.checks),
            Some(first) => format!(
                "FAIL {} checks={} failures={} first: {}",
                self.suite.name(),
                self.checks,
                self.failures,
                first.replace('\n', " / ")
            ),
        }
    }
}

/// Runs the named suite (or all of them) for sizes up to `n_max`.
pub fn verify_suites(which: Suite, n_max: usize) -> Result<Vec<SuiteResult>> {
    if n_max == 0 {
        return Err(Error::SizeTooSmall { n: 0, min: 1 });
    }
    if n_max > which.limit() {
        return Err(Error::LimitExceeded {
            what: which.name(),
            n: n_max,
            limit: which.limit(),
        });
    }
    which
        .components()
        .into_iter()
        .map(|s| match s {
            Suite::Bijections => bijections(n_max),
            Suite::Lattice => lattice(n_max),
            Suite::Lemmas => lemmas(n_max.max(2)),
            Suite::Census => census(n_max),
            Suite::Theorems => theorems(n_max),
            Suite::All => unreachable!(),
        })
        .collect()
}

fn bijections(n_max: usize) -> Result<SuiteResult> {
    let mut res = SuiteResult::new(Suite::Bijections);
    for n in 1..=n_max {
        let mut count = 0usize;
        for (k, t) in enumerate_triangles(n)?.enumerate() {
            count += 1;
            let c = to_column_sum(&t);
            let c_ok = ColumnSumMatrix::new(&c.to_rows()).is_ok_and(|c2| c2 == c);
            res.check(c_ok && from_column_sum(&c) == t, || {
                format!("column-sum roundtrip failed for\n{t}")
            });
            let a = to_asm(&t);
            let a_ok = AlternatingSignMatrix::new(&a.to_rows()).is_ok_and(|a2| a2 == a);
            res.check(a_ok && from_asm(&a) == t, || {
                format!("ASM roundtrip failed for\n{t}")
            });
            res.check(
                t.is_permutation_triangle() != a.has_negative_entry(),
                || format!("permutation flag disagrees with ASM signs for\n{t}"),
            );
            res.check(t.distinguished_rows().contains(n), || {
                format!("bottom row not distinguished in\n{t}")
            });
            res.check(t.rank_reverse().rank_reverse() == t, || {
                format!("rank reversal is not an involution on\n{t}")
            });
            if n <= 6 {
                let idx = BigUint::from(k);
                res.check(rank(&t)? == idx && unrank(n, &idx)? == t, || {
                    format!("rank/unrank disagree with enumeration order at index {k}")
                });
            }
        }
        res.expect_eq(BigUint::from(count), asm_number(n), || format!("|M_{n}|"));
        for p in Permutation::all(n) {
            let via_matrix = from_asm(&AlternatingSignMatrix::permutation_matrix(&p));
            res.check(perm_to_triangle(&p) == via_matrix, || {
                format!("permutation {:?} maps inconsistently", p.values())
            });
        }
    }
    Ok(res)
}

fn pair_laws(res: &mut SuiteResult, a: &MonotoneTriangle, b: &MonotoneTriangle) -> Result<()> {
    let m = meet2(a, b)?;
    let j = join2(a, b)?;
    let ctx = || format!("pair\n{a}\nand\n{b}");
    res.check(m == meet2(b, a)? && j == join2(b, a)?, || {
        format!("not commutative: {}", ctx())
    });
    res.check(meet2(a, a)? == *a && join2(a, a)? == *a, || {
        format!("not idempotent: {}", ctx())
    });
    res.check(meet2(a, &j)? == *a && join2(a, &m)? == *a, || {
        format!("absorption fails: {}", ctx())
    });
    res.check(le(&m, a)? && le(&m, b)? && le(a, &j)? && le(b, &j)?, || {
        format!("meet/join not bounds: {}", ctx())
    });
    let rel = compare(a, b)?;
    let want = if a == b {
        OrderRelation::Equal
    } else if m == *a {
        OrderRelation::Less
    } else if m == *b {
        OrderRelation::Greater
    } else {
        OrderRelation::Incomparable
    };
    res.check(rel == want, || {
        format!("compare gave {rel:?}, expected {want:?}: {}", ctx())
    });
    let n = a.n();
    let covered = a.distinguished_rows().union(&b.distinguished_rows()) == RowSet::full(n);
    let pair = [a.clone(), b.clone()];
    res.check(is_trivial(&pair, LatticeOp::Meet)? == covered, || {
        format!("coverage characterization fails: {}", ctx())
    });
    res.check(
        m.rank_reverse() == join2(&a.rank_reverse(), &b.rank_reverse())?,
        || format!("rank reversal does not swap meet and join: {}", ctx()),
    );
    Ok(())
}

fn triple_laws(res: &mut SuiteResult, ts: [&MonotoneTriangle; 3]) -> Result<()> {
    let [a, b, c] = ts;
    res.check(meet2(&meet2(a, b)?, c)? == meet2(a, &meet2(b, c)?)?, || {
        format!("meet not associative on\n{a}\n\n{b}\n\n{c}")
    });
    res.check(join2(&join2(a, b)?, c)? == join2(a, &join2(b, c)?)?, || {
        format!("join not associative on\n{a}\n\n{b}\n\n{c}")
    });
    let covered = [a, b, c]
        .iter()
        .fold(0u64, |acc, t| acc | t.distinguished_rows().mask())
        == RowSet::full(a.n()).mask();
    let tuple = [a.clone(), b.clone(), c.clone()];
    res.check(is_trivial(&tuple, LatticeOp::Meet)? == covered, || {
        format!("coverage characterization fails on\n{a}\n\n{b}\n\n{c}")
    });
    Ok(())
}

const LATTICE_EXHAUSTIVE_PAIRS: usize = 4;
const LATTICE_EXHAUSTIVE_TRIPLES: usize = 3;
const LATTICE_SAMPLES: usize = 2000;
const LATTICE_SEED: u64 = 0x1a77_1ce5;

fn lattice(n_max: usize) -> Result<SuiteResult> {
    let mut res = SuiteResult::new(Suite::Lattice);
    let mut rng = ChaCha8Rng::seed_from_u64(LATTICE_SEED);
    for n in 1..=n_max {
        let all: Vec<MonotoneTriangle> = enumerate_triangles(n)?.collect();
        if n <= LATTICE_EXHAUSTIVE_PAIRS {
            for a in &all {
                for b in &all {
                    pair_laws(&mut res, a, b)?;
                }
            }
        } else {
            for _ in 0..LATTICE_SAMPLES {
                let a = all.choose(&mut rng).expect("nonempty");
                let b = all.choose(&mut rng).expect("nonempty");
                pair_laws(&mut res, a, b)?;
            }
        }
        if n <= LATTICE_EXHAUSTIVE_TRIPLES {
            for a in &all {
                for b in &all {
                    for c in &all {
                        triple_laws(&mut res, [a, b, c])?;
                    }
                }
            }
        } else {
            for _ in 0..LATTICE_SAMPLES {
                let a = all.choose(&mut rng).expect("nonempty");
                let b = all.choose(&mut rng).expect("nonempty");
                let c = all.choose(&mut rng).expect("nonempty");
                triple_laws(&mut res, [a, b, c])?;
            }
        }
        let (lo, hi) = (
            extremal_triangle(n, Extreme::Min)?,
            extremal_triangle(n, Extreme::Max)?,
        );
        res.check(
            all.iter()
                .all(|t| le(&lo, t).unwrap_or(false) && le(t, &hi).unwrap_or(false)),
            || format!("extremal triangles do not bound M_{n}"),
        );
    }
    Ok(res)
}

fn lemmas(n_max: usize) -> Result<SuiteResult> {
    let report = lemma_margins(n_max)?;
    let mut res = SuiteResult::new(Suite::Lemmas);
    for fam in [&report.increase, &report.ratio, &report.corollary] {
        res.checks += fam.checks;
        res.failures += fam.failures.len();
        if res.first_failure.is_none() {
            res.first_failure = fam.failures.first().cloned();
        }
    }
    Ok(res)
}

fn census(n_max: usize) -> Result<SuiteResult> {
    let mut res = SuiteResult::new(Suite::Census);
    for n in 1..=n_max {
        let table = build_census(n)?;
        res.expect_eq(table.total(), asm_number(n), || {
            format!("census total at n={n}")
        });
        for mask in 0..1u64 << (n - 1) {
            let rows = RowSet::from_mask(n, mask)?;
            res.expect_eq(table.containing(&rows), eta(n, &rows)?, || {
                format!("containment vs eta at n={n}, I={rows}")
            });
        }
        res.check(
            CensusTable::parse(&table.to_text()).is_ok_and(|t| t == table),
            || format!("census text roundtrip failed at n={n}"),
        );
        res.check(
            build_census_with(n, CensusKey::RankReversed, 1)? == table,
            || format!("rank-reversed census differs at n={n}"),
        );
        let hist_total: BigUint = table.run_histogram().counts.values().sum();
        res.expect_eq(hist_total, asm_number(n), || {
            format!("run histogram total at n={n}")
        });
        if n >= 4 {
            let rep = run_histogram_report(n)?;
            res.check(rep.matches_block_claim, || {
                format!("block counts at n={n} are {:?}", rep.histogram.counts)
            });
        }
    }
    Ok(res)
}

fn theorems(n_max: usize) -> Result<SuiteResult> {
    let mut res = SuiteResult::new(Suite::Theorems);
    for n in 1..=n_max {
        res.expect_eq(asm_number_dp(n)?, asm_number(n), || {
            format!("DP count at n={n}")
        });
        let table = build_census(n)?;
        for r in 1..=3 {
            let rep = meet_census_report(n, r)?;
            let from_census = n_min_from_census(&table, r)?;
            res.expect_eq(rep.n_min.clone(), from_census, || {
                format!("inclusion-exclusion vs census at n={n}, r={r}")
            });
            res.check(rep.decomposition_holds(), || {
                format!("main + second + E != N_min at n={n}, r={r}")
            });
            let floor = BigUint::from(r) * Pow::pow(asm_number(n) - 1u32, (r - 1) as u32);
            let n_min = rep.n_min.clone();
            res.check(n_min >= floor, || {
                format!("N_min({n},{r}) = {n_min} below r(A(n)-1)^(r-1) = {floor}")
            });
            if n <= 5 {
                res.check(
                    p_extreme(n, r, Extreme::Min)? == p_extreme(n, r, Extreme::Max)?,
                    || format!("p_min != p_max at n={n}, r={r}"),
                );
            }
        }
    }
    Ok(res)
}
