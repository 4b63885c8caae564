//! Per-degree structure reports: the rational rank `α(u)`, the p-local
//! shape at each probed prime, Bass numbers, and the finite-coefficient
//! cross-check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cech::{build_slice, CechSlice};
use crate::error::{Error, Result};
use crate::monomial::{blocks, Block, CMonomialIdeal, ExponentVector};
use crate::plocal::{finite_approx, homology_all, uct_predict, PElem};

/// Default ceiling for the oracle's `K` doubling.
pub const DEFAULT_MAX_K: u32 = 64;

/// Primes dividing `θ = a_1 ... a_c`, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionPrimeSet {
    pub primes: Vec<u64>,
}

impl TorsionPrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

pub fn torsion_primes(ideal: &CMonomialIdeal) -> Result<TorsionPrimeSet> {
    let mut primes = BTreeSet::new();
    for g in ideal.generators() {
        primes.extend(arith::factorize(&g.coefficient)?.into_keys());
    }
    Ok(TorsionPrimeSet {
        primes: primes.into_iter().collect(),
    })
}

/// `μ_0` and `μ_1`; every higher Bass number vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassNumbers {
    pub mu0: usize,
    pub mu1: usize,
}

impl BassNumbers {
    pub fn mu(&self, j: usize) -> usize {
        match j {
            0 => self.mu0,
            1 => self.mu1,
            _ => 0,
        }
    }
}

/// `μ_0 = ℓ + t` (socles of `E(p)` and `Z/p^β`), `μ_1 = a + t`
/// (`Ext^1(k, L) = k`, `Ext^1(k, Z/p^β) = k`). `Q` is injective and
/// torsion-free, so it contributes to neither.
pub fn bass(e: &PElem) -> BassNumbers {
    BassNumbers {
        mu0: e.prufer + e.t(),
        mu1: e.free + e.t(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub usual: bool,
    /// Torsion part splits off; always true over the PID `Z`.
    pub split_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub ideal: CMonomialIdeal,
    pub i: usize,
    pub degree: ExponentVector,
    pub alpha: usize,
    pub locals: BTreeMap<u64, PElem>,
    pub bass: BTreeMap<u64, BassNumbers>,
    pub flags: ReportFlags,
    /// Structures at every spot `0..=c`, per prime.
    pub spots: BTreeMap<u64, Vec<PElem>>,
    /// `α` at every spot.
    pub rational_ranks: Vec<usize>,
}

/// Everything computed for one degree: all spots, all requested primes.
#[derive(Clone, Debug)]
pub struct DegreeAnalysis {
    pub ideal: CMonomialIdeal,
    pub degree: ExponentVector,
    pub slice: CechSlice,
    pub theta_primes: TorsionPrimeSet,
    pub rational_ranks: Vec<usize>,
    pub spots: BTreeMap<u64, Vec<PElem>>,
}

/// Computes the slice at `u` and its homology at every spot, rationally and
/// at each prime of `θ` together with `extra_primes`.
///
/// Panics if a computed structure violates `a_p + b_p = α`, or shows a
/// non-finitely-generated part at a prime not dividing `θ`; either one
/// means the engine itself is wrong.
pub fn analyze_degree(
    ideal: &CMonomialIdeal,
    u: &ExponentVector,
    extra_primes: &[u64],
) -> Result<DegreeAnalysis> {
    for &p in extra_primes {
        arith::ensure_prime(p)?;
    }
    let theta_primes = torsion_primes(ideal)?;
    let primes: BTreeSet<u64> = theta_primes
        .primes
        .iter()
        .chain(extra_primes)
        .copied()
        .collect();
    let slice = build_slice(ideal, u)?;
    let rational_ranks = slice.rationalize().homology_ranks();
    let mut spots = BTreeMap::new();
    for p in primes {
        let structures = homology_all(&slice.localize_at(p)?)?;
        for (i, e) in structures.iter().enumerate() {
            if e.rational_rank() != rational_ranks[i] {
                panic!(
                    "ConsistencyViolation: {ideal} at {u}, spot {i}, p={p}: a + b = {} but alpha = {}",
                    e.rational_rank(),
                    rational_ranks[i]
                );
            }
            if !theta_primes.contains(p) && (e.divfree > 0 || e.prufer > 0) {
                panic!("ConsistencyViolation: {ideal} at {u}, spot {i}: p={p} does not divide theta but structure is {e}");
            }
        }
        spots.insert(p, structures);
    }
    debug!("analyzed {ideal} at {u}: ranks {rational_ranks:?}");
    Ok(DegreeAnalysis {
        ideal: ideal.clone(),
        degree: u.clone(),
        slice,
        theta_primes,
        rational_ranks,
        spots,
    })
}

impl DegreeAnalysis {
    pub fn report(&self, i: usize) -> StructureReport {
        let alpha = self.rational_ranks.get(i).copied().unwrap_or(0);
        let locals: BTreeMap<u64, PElem> = self
            .spots
            .iter()
            .map(|(&p, s)| (p, s.get(i).cloned().unwrap_or_else(|| PElem::zero(p))))
            .collect();
        let bass = locals.iter().map(|(&p, e)| (p, bass(e))).collect();
        StructureReport {
            ideal: self.ideal.clone(),
            i,
            degree: self.degree.clone(),
            alpha,
            locals,
            bass,
            flags: ReportFlags {
                usual: self.ideal.is_usual(),
                split_certified: true,
            },
            spots: self.spots.clone(),
            rational_ranks: self.rational_ranks.clone(),
        }
    }
}

pub fn structure_report(
    ideal: &CMonomialIdeal,
    i: usize,
    u: &ExponentVector,
    extra_primes: &[u64],
) -> Result<StructureReport> {
    Ok(analyze_degree(ideal, u, extra_primes)?.report(i))
}

/// Wire form of a report: `{"alpha", "locals", "bass", "flags"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub alpha: usize,
    pub locals: BTreeMap<u64, LocalJson>,
    pub bass: BTreeMap<u64, [usize; 2]>,
    pub flags: ReportFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalJson {
    pub free: usize,
    pub q: usize,
    pub prufer: usize,
    pub torsion: Vec<u32>,
}

impl From<&PElem> for LocalJson {
    fn from(e: &PElem) -> Self {
        LocalJson {
            free: e.free,
            q: e.divfree,
            prufer: e.prufer,
            torsion: e.torsion.clone(),
        }
    }
}

impl From<&StructureReport> for ReportJson {
    fn from(r: &StructureReport) -> Self {
        ReportJson {
            alpha: r.alpha,
            locals: r.locals.iter().map(|(&p, e)| (p, e.into())).collect(),
            bass: r.bass.iter().map(|(&p, b)| (p, [b.mu0, b.mu1])).collect(),
            flags: r.flags,
        }
    }
}

/// Which `K` values the oracle runs at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleKs {
    /// `K` and `2K`, doubling `K` from 4 until every reported torsion
    /// exponent is below `K`.
    Stabilize {
        cap: u32,
    },
    Fixed(Vec<u32>),
}

impl Default for OracleKs {
    fn default() -> Self {
        OracleKs::Stabilize { cap: DEFAULT_MAX_K }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Oracle { p: u64, k: u32, spot: usize },
    RationalRank { spot: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub check: Check,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok { "PASS" } else { "FAIL" };
        match self.check {
            Check::Oracle { p, k, spot } => write!(
                f,
                "{status} p={p} K={k} spot {spot}: predicted {}, observed {}",
                self.expected, self.observed
            ),
            Check::RationalRank { spot } => {
                write!(
                    f,
                    "{status} rational rank spot {spot}: reported {}, observed {}",
                    self.expected, self.observed
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub comparisons: Vec<Comparison>,
}

impl Transcript {
    pub fn passed(&self) -> bool {
        self.comparisons.iter().all(|c| c.ok)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.comparisons {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Smallest `K = 4 · 2^j` exceeding every torsion exponent in `structures`.
pub fn stable_k(structures: &BTreeMap<u64, Vec<PElem>>, cap: u32) -> Result<u32> {
    let max_exponent = structures
        .values()
        .flatten()
        .flat_map(|e| e.torsion.iter().copied())
        .max()
        .unwrap_or(0);
    let mut k = 4;
    loop {
        if k > cap {
            return Err(Error::NonStabilizing { cap, max_exponent });
        }
        if k > max_exponent {
            return Ok(k);
        }
        k *= 2;
    }
}

/// Checks every reported structure, at all spots, against homology of the
/// slice reduced mod `p^K`, and re-derives the rational ranks.
pub fn verify_report(report: &StructureReport, ks: &OracleKs) -> Result<Transcript> {
    let slice = build_slice(&report.ideal, &report.degree)?;
    let ks = match ks {
        OracleKs::Fixed(ks) => ks.clone(),
        OracleKs::Stabilize { cap } => {
            let k = stable_k(&report.spots, *cap)?;
            vec![k, 2 * k]
        }
    };
    let mut comparisons = Vec::new();
    for (&p, structures) in &report.spots {
        for &k in &ks {
            let observed = finite_approx(&slice.reduce_mod(p, k)?)?;
            let predicted = uct_predict(structures, k);
            for (spot, (exp, obs)) in predicted.iter().zip(&observed).enumerate() {
                comparisons.push(Comparison {
                    check: Check::Oracle { p, k, spot },
                    expected: exp.to_string(),
                    observed: obs.to_string(),
                    ok: exp == obs,
                });
            }
            if predicted.len() != observed.len() {
                comparisons.push(Comparison {
                    check: Check::Oracle {
                        p,
                        k,
                        spot: predicted.len().min(observed.len()),
                    },
                    expected: format!("{} spots", predicted.len()),
                    observed: format!("{} spots", observed.len()),
                    ok: false,
                });
            }
        }
    }
    let ranks = slice.rationalize().homology_ranks();
    for (spot, &rank) in ranks.iter().enumerate() {
        let reported = report.rational_ranks.get(spot).copied();
        let per_prime_ok = report
            .spots
            .values()
            .all(|s| s.get(spot).map(PElem::rational_rank) == Some(rank));
        comparisons.push(Comparison {
            check: Check::RationalRank { spot },
            expected: reported.map_or("-".into(), |r| r.to_string()),
            observed: rank.to_string(),
            ok: reported == Some(rank) && per_prime_ok,
        });
    }
    Ok(Transcript { comparisons })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockScan {
    pub block: String,
    pub alpha: usize,
    pub torsion_free_present: bool,
    pub samples: Vec<(ExponentVector, usize)>,
}

/// A random degree in `block`, coordinates in `[0, 8]` or `[-8, -1]`.
pub fn random_degree_in(block: &Block, rng: &mut impl Rng) -> ExponentVector {
    ExponentVector::new(
        (0..block.n())
            .map(|i| {
                if block.is_nonneg(i) {
                    rng.gen_range(0..=8)
                } else {
                    rng.gen_range(-8..=-1)
                }
            })
            .collect(),
    )
}

/// `α` per block at the representative, confirmed at `samples` random
/// degrees of the block.
pub fn tame_scan(
    ideal: &CMonomialIdeal,
    i: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<Vec<BlockScan>> {
    blocks(ideal.n())
        .into_iter()
        .map(|block| {
            let alpha = crate::rational::alpha(ideal, i, &block.representative())?;
            let mut seen = Vec::with_capacity(samples);
            for _ in 0..samples {
                let u = random_degree_in(&block, rng);
                let found = crate::rational::alpha(ideal, i, &u)?;
                if found != alpha {
                    return Err(Error::BlockInconsistency {
                        block: block.pattern(),
                        expected: alpha,
                        found,
                        degree: u.entries().to_vec(),
                    });
                }
                seen.push((u, found));
            }
            Ok(BlockScan {
                block: block.pattern(),
                alpha,
                torsion_free_present: alpha > 0,
                samples: seen,
            })
        })
        .collect()
}

/// [`tame_scan`] with a reproducible generator seeded from `seed`.
pub fn tame_scan_seeded(
    ideal: &CMonomialIdeal,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<BlockScan>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    tame_scan(ideal, i, samples, &mut rng)
}
