//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, Zero};

use gog_core::census::build_census;
use gog_core::counting::{asm_number, asm_number_dp, eta, lemma_margins};
use gog_core::enumeration::{enumerate_triangles, rank, sample_uniform};
use gog_core::lattice::{join, join2, le, meet, meet2};
use gog_core::meet_census::{
    n_min_census, n_min_direct, n_min_exact, p_extreme, run_histogram_report, theorem_report,
};
use gog_core::numeric::{format_sig, ratio, ratio_u};
use gog_core::text::format_all;
use gog_core::triangle::Extreme;
use gog_core::{
    from_asm, from_column_sum, to_asm, to_column_sum, AlternatingSignMatrix, BigRational,
    ColumnSumMatrix, MonotoneTriangle, RowSet,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_of(n: usize) -> Vec<MonotoneTriangle> {
    enumerate_triangles(n).unwrap().collect()
}

fn counting_agreement() -> Outcome {
    let expected = [1u32, 2, 7, 42, 429, 7436, 218348];
    let mut slowest = Duration::ZERO;
    for (k, &want) in expected.iter().enumerate() {
        let n = k + 1;
        let formula = asm_number(n);
        let dp = asm_number_dp(n).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let listed = enumerate_triangles(n).map_err(|e| e.to_string())?.count();
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(
            formula == BigUint::from(want) && dp == formula && BigUint::from(listed) == formula,
            || format!("n={n}: formula {formula}, dp {dp}, enumerated {listed}, expected {want}"),
        )?;
        if n == 7 {
            ensure(took < Duration::from_secs(60), || {
                format!("enumeration at n=7 took {took:?}")
            })?;
        }
    }
    Ok(format!("n=1..7 agree; enumeration n=7 in {slowest:.2?}"))
}

fn bijection_fidelity() -> Outcome {
    let mut checked = 0;
    for n in 1..=6 {
        for t in all_of(n) {
            let c = to_column_sum(&t);
            let c2 = ColumnSumMatrix::new(&c.to_rows()).map_err(|e| e.to_string())?;
            let a = to_asm(&t);
            let a2 = AlternatingSignMatrix::new(&a.to_rows()).map_err(|e| e.to_string())?;
            ensure(from_column_sum(&c2) == t && from_asm(&a2) == t, || {
                format!("roundtrip failed on\n{t}")
            })?;
            checked += 1;
        }
    }
    let t = MonotoneTriangle::from_rows(&[vec![3i64], vec![2, 4], vec![1, 3, 4], vec![1, 2, 3, 4]])
        .map_err(|e| e.to_string())?;
    let text = format!("{t}\n\n{}\n\n{}\n", to_column_sum(&t), to_asm(&t));
    let want = "3\n2 4\n1 3 4\n1 2 3 4\n\n\
                0 0 1 0\n0 1 0 1\n1 0 1 1\n1 1 1 1\n\n\
                0 0 1 0\n0 1 -1 1\n1 -1 1 0\n0 1 0 0\n";
    ensure(text == want, || format!("worked-example triple renders as\n{text}"))?;
    Ok(format!(
        "{checked} triangles roundtrip; worked-example triple byte-exact"
    ))
}

fn lattice_laws() -> Outcome {
    let m4 = all_of(4);
    let mut pairs = 0;
    for a in &m4 {
        for b in &m4 {
            let (m, j) = (
                meet2(a, b).map_err(|e| e.to_string())?,
                join2(a, b).map_err(|e| e.to_string())?,
            );
            let ok = m == meet2(b, a).unwrap()
                && j == join2(b, a).unwrap()
                && meet2(a, a).unwrap() == *a
                && join2(a, a).unwrap() == *a
                && meet2(a, &j).unwrap() == *a
                && join2(a, &m).unwrap() == *a
                && le(&m, a).unwrap()
                && le(&m, b).unwrap()
                && le(a, &j).unwrap()
                && le(b, &j).unwrap()
                && m4.iter().all(|c| {
                    let below = le(c, a).unwrap() && le(c, b).unwrap();
                    let above = le(a, c).unwrap() && le(b, c).unwrap();
                    (!below || le(c, &m).unwrap()) && (!above || le(&j, c).unwrap())
                });
            ensure(ok, || format!("law fails on pair\n{a}\nand\n{b}"))?;
            pairs += 1;
        }
    }
    let picks = sample_uniform(6, 30_000, 0x7a1e_5eed).map_err(|e| e.to_string())?;
    for tri in picks.chunks(3) {
        let (a, b, c) = (&tri[0], &tri[1], &tri[2]);
        let m = meet(tri).map_err(|e| e.to_string())?;
        let j = join(tri).map_err(|e| e.to_string())?;
        let ok = meet2(&meet2(a, b).unwrap(), c).unwrap() == m
            && meet2(a, &meet2(b, c).unwrap()).unwrap() == m
            && join2(&join2(a, b).unwrap(), c).unwrap() == j
            && join2(a, &join2(b, c).unwrap()).unwrap() == j
            && meet2(a, &join2(a, b).unwrap()).unwrap() == *a
            && join2(c, &meet2(c, a).unwrap()).unwrap() == *c
            && tri.iter().all(|t| le(&m, t).unwrap() && le(t, &j).unwrap());
        ensure(ok, || format!("law fails on triple\n{a}\n\n{b}\n\n{c}"))?;
    }
    Ok(format!(
        "{pairs} pairs of M_4 (GLB/LUB checked against all 42 triangles), 10000 triples of M_6"
    ))
}

fn eta_exactness() -> Outcome {
    let mut subsets = 0;
    for n in 1..=6 {
        let all = all_of(n);
        for mask in 0..1u64 << (n - 1) {
            let rows = RowSet::from_mask(n, mask).unwrap();
            let brute = all
                .iter()
                .filter(|t| {
                    rows.rows().all(|i| {
                        t.row(i)
                            .iter()
                            .enumerate()
                            .all(|(j, &v)| v as usize == j + 1)
                    })
                })
                .count();
            let e = eta(n, &rows).map_err(|e| e.to_string())?;
            ensure(e == BigUint::from(brute), || {
                format!("eta({n}, {rows}) = {e}, brute force {brute}")
            })?;
            ensure(e <= asm_number(n - rows.len()), || {
                format!("eta({n}, {rows}) = {e} exceeds A({})", n - rows.len())
            })?;
            subsets += 1;
        }
    }
    Ok(format!(
        "{subsets} subsets over n=1..6 match brute force and the corollary bound"
    ))
}

fn lemma_sweeps() -> Outcome {
    let a: Vec<BigInt> = (0..=26).map(|k| BigInt::from(asm_number(k))).collect();
    let mut checks = 0;
    for i1 in 1..=25usize {
        for i2 in 1..=i1 {
            let margin = &a[i1 + 1] * &a[i2 - 1] - &a[i1] * &a[i2];
            ensure(!margin.is_negative(), || {
                format!("increase margin negative at ({i1}, {i2})")
            })?;
            checks += 1;
        }
    }
    for n in 1..=25usize {
        for c in 1..=n {
            let e = (c * (2 * n - c - 1) / 2) as u32;
            let margin =
                &a[n] * Pow::pow(BigInt::from(2), e) - &a[n - c] * Pow::pow(BigInt::from(3), e);
            ensure(!margin.is_negative(), || {
                format!("ratio margin negative at n={n}, c={c}")
            })?;
            checks += 1;
        }
    }
    let report = lemma_margins(25).map_err(|e| e.to_string())?;
    ensure(report.increase.passed() && report.ratio.passed(), || {
        format!(
            "library sweep failed: {:?} {:?}",
            report.increase.failures, report.ratio.failures
        )
    })?;
    ensure(
        report.increase.checks + report.ratio.checks == checks,
        || {
            format!(
                "library ran {} checks, oracle {checks}",
                report.increase.checks + report.ratio.checks
            )
        },
    )?;
    Ok(format!("{checks} exact margins nonnegative up to 25"))
}

fn trivial_meet_oracle() -> Outcome {
    for n in 1..=6 {
        for r in 1..=3 {
            let ie = n_min_exact(n, r).map_err(|e| e.to_string())?;
            let census = n_min_census(n, r).map_err(|e| e.to_string())?;
            ensure(ie == census, || {
                format!("n={n}, r={r}: IE {ie}, census {census}")
            })?;
        }
    }
    let spot = [(2, 2, 3u32), (3, 2, 15)];
    for (n, r, want) in spot {
        let brute = n_min_direct(n, r).map_err(|e| e.to_string())?;
        let ie = n_min_exact(n, r).unwrap();
        ensure(brute == BigUint::from(want) && ie == brute, || {
            format!("N_min({n},{r}): brute {brute}, IE {ie}, expected {want}")
        })?;
    }
    Ok("IE = census for n<=6, r<=3; N_min(2,2)=3, N_min(3,2)=15".into())
}

fn duality() -> Outcome {
    for n in 1..=5 {
        for r in 1..=3 {
            let lo = p_extreme(n, r, Extreme::Min).map_err(|e| e.to_string())?;
            let hi = p_extreme(n, r, Extreme::Max).map_err(|e| e.to_string())?;
            ensure(lo == hi, || {
                format!("n={n}, r={r}: p_min {lo} != p_max {hi}")
            })?;
        }
    }
    Ok("p_min = p_max for n<=5, r<=3".into())
}

/// `p_min A(n) / r` for n = 6..14, frozen from a derivation run.
const THEOREM1_RATIOS: [(usize, [&str; 9]); 2] = [
    (
        2,
        [
            "1.19466110812",
            "1.10629133310",
            "1.05398302670",
            "1.02812731970",
            "1.01541678749",
            "1.00875951709",
            "1.00507375976",
            "1.00296799235",
            "1.00174538978",
        ],
    ),
    (
        3,
        [
            "1.40058563094",
            "1.21652040608",
            "1.10882103829",
            "1.05640930625",
            "1.03086096803",
            "1.01752410781",
            "1.01014850543",
            "1.00593618226",
            "1.00349081981",
        ],
    ),
];

fn theorem1_trend() -> Outcome {
    let mut worst = String::new();
    for (r, frozen) in THEOREM1_RATIOS {
        let reports = theorem_report(14, r).map_err(|e| e.to_string())?;
        let mut prev: Option<BigRational> = None;
        for rep in reports.iter().filter(|rep| rep.n >= 6) {
            let n = rep.n;
            let dev = (&rep.ratio_to_leading - BigRational::one()).abs();
            let tol = ratio(BigInt::from(8 * (r - 1)), BigInt::one())
                * ratio(BigInt::from(2), BigInt::from(3)).pow((n - 1) as i32);
            ensure(dev <= tol, || {
                format!(
                    "r={r}, n={n}: |ratio-1| = {} exceeds {}",
                    format_sig(&dev, 6),
                    format_sig(&tol, 6)
                )
            })?;
            let shown = format_sig(&rep.ratio_to_leading, 12);
            ensure(shown == frozen[n - 6], || {
                format!("r={r}, n={n}: ratio {shown}, recorded {}", frozen[n - 6])
            })?;
            if n >= 8 {
                if let Some(p) = &prev {
                    ensure(&dev < p, || {
                        format!("r={r}: |ratio-1| does not decrease at n={n}")
                    })?;
                }
            }
            if n >= 7 {
                prev = Some(dev.clone());
            }
            if n == 14 {
                worst.push_str(&format!(" r={r}: {}", format_sig(&dev, 3)));
            }
        }
    }
    Ok(format!(
        "within 8(r-1)(2/3)^(n-1) on n=6..14, decreasing on 8..14; |ratio-1| at n=14:{worst}"
    ))
}

/// E for r = 2, n = 1..14, frozen from a derivation run.
const THEOREM2_E: [&str; 14] = [
    "-5",
    "-5",
    "-7",
    "-5",
    "77",
    "1179",
    "16673",
    "298063",
    "7894111",
    "346662871",
    "26630326423",
    "3590553952679",
    "838000985714127",
    "334697476157749795",
];

fn theorem2_decomposition() -> Outcome {
    let mut identities = 0;
    for r in 1..=3 {
        for rep in theorem_report(14, r).map_err(|e| e.to_string())? {
            ensure(rep.decomposition_holds(), || {
                format!("identity fails at n={}, r={r}", rep.n)
            })?;
            identities += 1;
            if r == 2 {
                ensure(rep.error_term.to_string() == THEOREM2_E[rep.n - 1], || {
                    format!(
                        "E at n={} is {}, recorded {}",
                        rep.n,
                        rep.error_term,
                        THEOREM2_E[rep.n - 1]
                    )
                })?;
                if rep.n >= 6 {
                    let theta = rep.theta_ratio.clone().ok_or("missing theta ratio")?;
                    ensure(
                        theta.abs() <= ratio(BigInt::from(100), BigInt::one()),
                        || format!("|theta| at n={} is {}", rep.n, format_sig(&theta, 6)),
                    )?;
                }
            }
        }
    }
    let spec = gog_cli::parse_command(["theorem2", "--r", "2", "--n-max", "14"])
        .map_err(|e| e.to_string())?;
    let table = gog_cli::execute(&spec, &mut std::io::empty()).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = table.lines().collect();
    ensure(
        lines.len() == 15 && lines[1].split('\t').nth(4) == Some("-5"),
        || format!("theorem2 table malformed:\n{table}"),
    )?;
    Ok(format!(
        "{identities} exact identities; |theta| <= 100 for r=2, n=6..14; signs emitted"
    ))
}

fn block_counts() -> Outcome {
    for n in 4..=7 {
        let rep = run_histogram_report(n).map_err(|e| e.to_string())?;
        let h = &rep.histogram.counts;
        let get = |l: usize| h.get(&l).cloned().unwrap_or_default();
        let rest: BigUint = h.iter().filter(|(&l, _)| l + 3 <= n).map(|(_, c)| c).sum();
        ensure(
            get(n) == BigUint::from(1u32)
                && get(n - 1) == BigUint::from(1u32)
                && get(n - 2) == BigUint::from(6u32)
                && rest == asm_number(n) - 8u32
                && rep.matches_block_claim,
            || format!("n={n}: histogram {h:?}"),
        )?;
    }
    let h3 = build_census(3).unwrap().run_histogram().counts;
    let want: BTreeMap<usize, BigUint> = [(1, 5u32), (2, 1), (3, 1)]
        .into_iter()
        .map(|(l, c)| (l, BigUint::from(c)))
        .collect();
    ensure(
        h3 == want && !run_histogram_report(3).unwrap().matches_block_claim,
        || format!("n=3 histogram {h3:?}"),
    )?;
    Ok("1, 1, 6 and A(n)-8 for n=4..7; n=3 deviates with {3:1, 2:1, 1:5}".into())
}

const SAMPLE_SEED: u64 = 20_241_019;
const CHI2_CRITICAL: f64 = 74.7;

fn sampling() -> Outcome {
    let samples = sample_uniform(4, 42_000, SAMPLE_SEED).map_err(|e| e.to_string())?;
    let mut hits = [0u64; 42];
    for t in &samples {
        let k: usize = rank(t).unwrap().try_into().unwrap();
        hits[k] += 1;
    }
    let expected = 1000.0;
    let chi2: f64 = hits
        .iter()
        .map(|&h| (h as f64 - expected).powi(2) / expected)
        .sum();
    ensure(chi2 < CHI2_CRITICAL, || {
        format!("chi-square {chi2:.2} with seed {SAMPLE_SEED}")
    })?;
    let again = sample_uniform(4, 42_000, SAMPLE_SEED).unwrap();
    ensure(format_all(&again) == format_all(&samples), || {
        "same seed, different bytes".into()
    })?;
    let run = |seed: &str| {
        let spec = gog_cli::parse_command(["sample", "--n", "5", "--count", "20", "--seed", seed])
            .unwrap();
        gog_cli::execute(&spec, &mut std::io::empty()).unwrap()
    };
    ensure(run("7") == run("7") && run("7") != run("8"), || {
        "CLI sampling not seed-determined".into()
    })?;
    Ok(format!("chi-square {chi2:.2} < {CHI2_CRITICAL} (df 41, seed {SAMPLE_SEED}); byte-exact under reseeding"))
}

fn performance() -> Outcome {
    let start = Instant::now();
    let v = n_min_exact(16, 2).map_err(|e| e.to_string())?;
    let ie = start.elapsed();
    ensure(!v.is_zero(), || "N_min(16,2) is zero".into())?;
    ensure(ie < Duration::from_secs(60), || {
        format!("n_min_exact(16, 2) took {ie:?}")
    })?;
    let start = Instant::now();
    let census = build_census(6).map_err(|e| e.to_string())?;
    let built = start.elapsed();
    ensure(census.total() == asm_number(6), || {
        "census n=6 total wrong".into()
    })?;
    ensure(built < Duration::from_secs(5), || {
        format!("census n=6 took {built:?}")
    })?;
    let p = ratio_u(&v, &Pow::pow(asm_number(16), 2u32));
    Ok(format!(
        "n_min_exact(16,2) in {ie:.2?} (p_min {}); census n=6 in {built:.2?}",
        format_sig(&p, 6)
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("counting agreement", counting_agreement),
        ("bijection fidelity", bijection_fidelity),
        ("lattice laws", lattice_laws),
        ("eta exactness", eta_exactness),
        ("lemma sweeps", lemma_sweeps),
        ("trivial-meet oracle", trivial_meet_oracle),
        ("duality", duality),
        ("leading-order trend", theorem1_trend),
        ("second-order decomposition", theorem2_decomposition),
        ("block counts", block_counts),
        ("sampling", sampling),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {}", k + 1, detail.replace('\n', " / "));
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
