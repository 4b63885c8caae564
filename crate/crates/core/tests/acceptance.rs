//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use lcstruct::assembly::{analyze_degree, random_degree_in, stable_k, Check, DEFAULT_MAX_K};
use lcstruct::plocal::homology_at;
use lcstruct::{
    bass, blocks, structure_report, tame_scan, verify_report, CMonomialIdeal, Mat, OracleKs, PElem,
    PLocalComplex, StructureReport, SummandKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Suite) -> Outcome);

/// Reports produced by the fixture criteria, re-checked for Bass numbers.
#[derive(Default)]
struct Suite {
    reports: Vec<StructureReport>,
}

fn e(p: u64, a: usize, b: usize, l: usize, torsion: Vec<u32>) -> PElem {
    PElem::new(p, a, b, l, torsion)
}

fn expect_local(r: &StructureReport, p: u64, want: &PElem) -> Result<(), String> {
    match r.locals.get(&p) {
        Some(got) if got == want => Ok(()),
        got => Err(format!(
            "{} i={} u={} p={p}: expected {want}, got {got:?}",
            r.ideal, r.i, r.degree
        )),
    }
}

fn expect_alpha(r: &StructureReport, want: usize) -> Result<(), String> {
    if r.alpha == want {
        Ok(())
    } else {
        Err(format!(
            "{} i={} u={}: alpha {} != {want}",
            r.ideal, r.i, r.degree, r.alpha
        ))
    }
}

fn is_zero_report(r: &StructureReport) -> bool {
    r.alpha == 0 && r.locals.values().all(PElem::is_zero)
}

fn c1(suite: &mut Suite) -> Outcome {
    let ideal = CMonomialIdeal::new(1, vec![(2, vec![1])]).unwrap();
    for u in [0, 1, 2] {
        let r = structure_report(&ideal, 1, &deg(&[u]), &[]).map_err(|e| e.to_string())?;
        expect_alpha(&r, 0)?;
        expect_local(&r, 2, &e(2, 0, 0, 1, vec![]))?;
        suite.reports.push(r);
    }
    for u in [-1, -2] {
        let r = structure_report(&ideal, 1, &deg(&[u]), &[3]).map_err(|e| e.to_string())?;
        expect_alpha(&r, 1)?;
        expect_local(&r, 2, &e(2, 0, 1, 0, vec![]))?;
        expect_local(&r, 3, &e(3, 1, 0, 0, vec![]))?;
        suite.reports.push(r);
    }
    Ok("(2X), i=1, u in {-2..2}".into())
}

fn c2(suite: &mut Suite) -> Outcome {
    let ideal = CMonomialIdeal::new(2, vec![(2, vec![1, 0]), (1, vec![0, 1])]).unwrap();
    let points = box_points(2, -3, 2);
    for u in &points {
        let r = structure_report(&ideal, 2, u, &[]).map_err(|e| e.to_string())?;
        let below = u.entries().iter().all(|&x| x <= -1);
        expect_alpha(&r, below as usize)?;
        let local = &r.locals[&2];
        if local.free != 0 || !local.torsion.is_empty() {
            return Err(format!(
                "u={u}: p=2 structure {local} has a lattice or finite part"
            ));
        }
        match u.entries() {
            [-1, -1] => expect_local(&r, 2, &e(2, 0, 1, 0, vec![]))?,
            [0, -1] => expect_local(&r, 2, &e(2, 0, 0, 1, vec![]))?,
            _ => {}
        }
        suite.reports.push(r);
    }
    Ok(format!(
        "(2X, Y), i=2, {} degrees in [-3,2]^2",
        points.len()
    ))
}

fn c3(suite: &mut Suite) -> Outcome {
    let probes = [2, 3, 5];
    let mut checked = 0;
    // (X_1..X_t) in n variables; t = n is the maximal ideal.
    for n in 1..=3usize {
        for t in 1..=n {
            let gens = (0..t)
                .map(|j| (0..n).map(|k| (k == j) as i64).collect())
                .collect();
            let ideal = CMonomialIdeal::usual(n, gens).unwrap();
            for u in box_points(n, -2, 1) {
                let a = analyze_degree(&ideal, &u, &probes).map_err(|e| e.to_string())?;
                let x = u.entries();
                let nonzero = x[..t].iter().all(|&v| v <= -1) && x[t..].iter().all(|&v| v >= 0);
                for i in 0..=t + 1 {
                    let r = a.report(i);
                    if i == t && nonzero {
                        expect_alpha(&r, 1)?;
                        for p in probes {
                            expect_local(&r, p, &e(p, 1, 0, 0, vec![]))?;
                        }
                    } else if !is_zero_report(&r) {
                        return Err(format!(
                            "{ideal} i={i} u={u}: expected zero, got alpha {} {:?}",
                            r.alpha, r.locals
                        ));
                    }
                    checked += 1;
                    suite.reports.push(r);
                }
            }
        }
    }
    Ok(format!("(X_1..X_t), t <= n <= 3, {checked} reports"))
}

fn c4(_: &mut Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut reports = 0;
    for _ in 0..50 {
        let ideal = random_usual(&mut rng, 3, 4);
        for u in box_points(ideal.n(), -3, 3) {
            let a = analyze_degree(&ideal, &u, &[2, 3, 5]).map_err(|e| e.to_string())?;
            for i in 0..=ideal.c() {
                for (p, e) in &a.report(i).locals {
                    if e.divfree != 0 || e.prufer != 0 {
                        return Err(format!("{ideal} i={i} u={u} p={p}: {e}"));
                    }
                    reports += 1;
                }
            }
        }
    }
    Ok(format!(
        "50 usual ideals, {reports} local structures, b = l = 0"
    ))
}

fn c5(suite: &mut Suite) -> Outcome {
    let ideal = CMonomialIdeal::new(2, vec![(2, vec![1, 0]), (3, vec![0, 1])]).unwrap();
    for u in box_points(2, -3, 3) {
        let a = analyze_degree(&ideal, &u, &[5]).map_err(|e| e.to_string())?;
        for i in [1, 2] {
            let r = a.report(i);
            let local = &r.locals[&5];
            if local.divfree != 0 || local.prufer != 0 || !local.torsion.is_empty() {
                return Err(format!("i={i} u={u}: p=5 structure {local}"));
            }
            suite.reports.push(r);
        }
    }
    Ok("(2X, 3Y), i in {1,2}, [-3,3]^2, p=5".into())
}

fn c6(_: &mut Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut scans = 0;
    for _ in 0..30 {
        let ideal = random_c_ideal(&mut rng, 3, 4, &COEFFICIENTS);
        for i in 0..=ideal.c() {
            let scan =
                tame_scan(&ideal, i, 3, &mut rng).map_err(|e| format!("{ideal} i={i}: {e}"))?;
            if scan.len() != 1 << ideal.n() || scan.iter().any(|b| b.samples.len() != 3) {
                return Err(format!("{ideal} i={i}: incomplete scan"));
            }
            let values: BTreeSet<usize> = scan.iter().map(|b| b.alpha).collect();
            if values.len() > 1 << ideal.n() {
                return Err(format!("{ideal} i={i}: {} alpha values", values.len()));
            }
            scans += 1;
        }
    }
    Ok(format!("30 ideals, {scans} block scans"))
}

fn c7(_: &mut Suite) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut comparisons, mut nontrivial) = (0, 0);
    for _ in 0..100 {
        let ideal = random_c_ideal(&mut rng, 3, 4, &COEFFICIENTS);
        let i = rand::Rng::gen_range(&mut rng, 0..=ideal.c());
        for block in blocks(ideal.n()) {
            for u in [block.representative(), random_degree_in(&block, &mut rng)] {
                let report = structure_report(&ideal, i, &u, &[]).map_err(|e| e.to_string())?;
                let transcript =
                    verify_report(&report, &OracleKs::Stabilize { cap: DEFAULT_MAX_K })
                        .map_err(|e| e.to_string())?;
                if !transcript.passed() {
                    let bad: Vec<String> = transcript
                        .comparisons
                        .iter()
                        .filter(|c| !c.ok)
                        .map(ToString::to_string)
                        .collect();
                    return Err(format!("{ideal} i={i} u={u}: {}", bad.join("; ")));
                }
                let k = stable_k(&report.spots, DEFAULT_MAX_K).map_err(|e| e.to_string())?;
                let ks: BTreeSet<u32> = transcript
                    .comparisons
                    .iter()
                    .filter_map(|c| match c.check {
                        Check::Oracle { k, .. } => Some(k),
                        Check::RationalRank { .. } => None,
                    })
                    .collect();
                if !ks.is_empty() && ks != BTreeSet::from([k, 2 * k]) {
                    return Err(format!(
                        "{ideal} u={u}: compared at K = {ks:?}, expected {k} and {}",
                        2 * k
                    ));
                }
                comparisons += transcript.comparisons.len();
                nontrivial += report
                    .spots
                    .values()
                    .flatten()
                    .filter(|e| e.prufer + e.divfree + e.t() > 0)
                    .count();
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("runtime {elapsed:.1?} exceeds 60 s"));
    }
    Ok(format!("100 instances, {comparisons} comparisons, {nontrivial} non-lattice structures, {elapsed:.1?}"))
}

fn c8(_: &mut Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut points = 0;
    for _ in 0..50 {
        let ideal = random_usual(&mut rng, 3, 4);
        let gens = exponent_lists(&ideal);
        let components: Vec<Vec<Vec<i64>>> = ideal
            .primary_decompose()
            .map_err(|e| e.to_string())?
            .iter()
            .map(exponent_lists)
            .collect();
        for comp in &components {
            if comp
                .iter()
                .any(|g| g.iter().filter(|&&x| x > 0).count() != 1)
            {
                return Err(format!(
                    "{ideal}: component {comp:?} is not pure-power generated"
                ));
            }
        }
        let bound = 2 * gens.iter().flatten().max().copied().unwrap_or(0) + 1;
        for m in box_points(ideal.n(), 0, bound) {
            let m = m.entries();
            if monomial_member(&gens, m) != components.iter().all(|c| monomial_member(c, m)) {
                return Err(format!(
                    "{ideal}: membership of {m:?} differs from the intersection"
                ));
            }
            points += 1;
        }
    }
    Ok(format!("50 ideals, {points} monomials"))
}

/// `(dim Hom(k, M), dim Ext^1(k, M))` for `M = Z/p^β`, by enumeration.
/// With `0 -> L -p-> L -> k -> 0` these are `dim M[p]` and `dim M/pM`.
fn cyclic_counts(p: u64, beta: u32) -> (usize, usize) {
    let q = p.pow(beta);
    let socle = (0..q).filter(|x| (x * p).is_multiple_of(q)).count();
    let image: BTreeSet<u64> = (0..q).map(|x| x * p % q).collect();
    (log(p, socle as u64), log(p, q / image.len() as u64))
}

fn log(p: u64, mut x: u64) -> usize {
    let mut k = 0;
    while x > 1 {
        assert_eq!(x % p, 0);
        x /= p;
        k += 1;
    }
    k
}

/// Direct counts for every summand kind. `E(p)` is modelled on the window
/// `p^-N Z / Z` (which holds its whole socle, and is `p` times the next
/// window); `L` on integers modulo `p`; `Q` is uniquely divisible.
fn direct_counts(e: &PElem) -> (usize, usize) {
    let p = e.p;
    let window = |n: u32| p.pow(n);
    let prufer_socle = (0..window(4))
        .filter(|x| (x * p).is_multiple_of(window(4)))
        .count();
    let next: BTreeSet<u64> = (0..window(5)).map(|x| x * p % window(5)).collect();
    let prufer_cosocle = if next.len() as u64 == window(4) { 0 } else { 1 };
    let lattice_cosocle = (-(p as i64).pow(3)..=(p as i64).pow(3))
        .map(|x| x.rem_euclid(p as i64))
        .collect::<BTreeSet<_>>()
        .len();
    let (mut mu0, mut mu1) = (0, 0);
    mu0 += e.prufer * log(p, prufer_socle as u64);
    mu1 += e.prufer * prufer_cosocle;
    mu1 += e.free * log(p, lattice_cosocle as u64);
    for &b in &e.torsion {
        let (s, c) = cyclic_counts(p, b);
        mu0 += s;
        mu1 += c;
    }
    (mu0, mu1)
}

fn c9(suite: &mut Suite) -> Outcome {
    for r in &suite.reports {
        for (p, local) in &r.locals {
            let b = bass(local);
            if (2..6).any(|j| b.mu(j) != 0)
                || b.mu0 != local.prufer + local.t()
                || b.mu1 != local.free + local.t()
            {
                return Err(format!(
                    "{} i={} u={} p={p}: {local} gives {b:?}",
                    r.ideal, r.i, r.degree
                ));
            }
            if r.bass.get(p) != Some(&b) {
                return Err(format!(
                    "{} u={}: report Bass numbers {:?} disagree",
                    r.ideal,
                    r.degree,
                    r.bass.get(p)
                ));
            }
        }
    }
    let fixed = [
        (e(2, 0, 0, 1, vec![]), (1, 0)),
        (e(3, 1, 0, 0, vec![]), (0, 1)),
        (e(5, 0, 1, 0, vec![]), (0, 0)),
    ];
    for (elem, (m0, m1)) in &fixed {
        let b = bass(elem);
        if (b.mu0, b.mu1) != (*m0, *m1) {
            return Err(format!("{elem}: {b:?}, expected ({m0}, {m1})"));
        }
    }
    let mut synthetic = 0;
    for p in [2u64, 3, 5] {
        for a in 0..=2 {
            for b in 0..=1 {
                for l in 0..=2 {
                    for torsion in [vec![], vec![1], vec![1, 3], vec![2, 2, 4]] {
                        let elem = e(p, a, b, l, torsion);
                        let counts = direct_counts(&elem);
                        let got = bass(&elem);
                        if (got.mu0, got.mu1) != counts || got.mu(2) != 0 {
                            return Err(format!("{elem}: {got:?} vs direct {counts:?}"));
                        }
                        synthetic += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} fixture structures, {synthetic} synthetic values",
        suite.reports.iter().map(|r| r.locals.len()).sum::<usize>()
    ))
}

fn c10(_: &mut Suite) -> Outcome {
    use SummandKind::{L, Q};
    let m = |rows: &[&[i64]]| {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
            cols,
        )
    };
    let p = 2;
    let cases: Vec<(&str, PLocalComplex, Vec<PElem>)> = vec![
        (
            "[L -1-> Q]",
            PLocalComplex::new(p, vec![vec![L], vec![Q]], vec![m(&[&[1]])]).unwrap(),
            vec![PElem::zero(p), e(p, 0, 0, 1, vec![])],
        ),
        (
            "[L -0-> Q]",
            PLocalComplex::new(p, vec![vec![L], vec![Q]], vec![m(&[&[0]])]).unwrap(),
            vec![e(p, 1, 0, 0, vec![]), e(p, 0, 1, 0, vec![])],
        ),
        (
            "[L -p^2-> L]",
            PLocalComplex::new(p, vec![vec![L], vec![L]], vec![m(&[&[4]])]).unwrap(),
            vec![PElem::zero(p), e(p, 0, 0, 0, vec![2])],
        ),
        (
            "[L+Q -> Q]",
            PLocalComplex::new(p, vec![vec![L, Q], vec![Q]], vec![m(&[&[1, -1]])]).unwrap(),
            vec![e(p, 1, 0, 0, vec![]), PElem::zero(p)],
        ),
    ];
    for (name, c, want) in &cases {
        for (i, w) in want.iter().enumerate() {
            let got = homology_at(c, i).map_err(|e| e.to_string())?;
            if &got != w {
                return Err(format!("{name} spot {i}: expected {w}, got {got}"));
            }
        }
    }
    Ok(format!("{} synthetic complexes", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("(2X) exact structure", c1),
        ("(2X, Y) exact structure", c2),
        ("maximal and coordinate ideals", c3),
        ("finite generation for usual ideals", c4),
        ("excluded prime 5 for (2X, 3Y)", c5),
        ("block constancy and tameness", c6),
        ("finite-approximation oracle equivalence", c7),
        ("primary decomposition oracle", c8),
        ("Bass numbers", c9),
        ("engine unit fixtures", c10),
    ];
    let mut suite = Suite::default();
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut suite)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!(
                "[PASS] criterion {}: {name} ({detail}; {:.2?})",
                n + 1,
                start.elapsed()
            ),
            Err(why) => {
                failures += 1;
                println!("[FAIL] criterion {}: {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
