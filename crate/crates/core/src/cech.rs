//! Degree-`u` slices of the Čech complex on the generators `a_1 U_1, ..., a_c U_c`.
//!
//! The summand for a subset `T` of generators is the degree-`u` piece of
//! `R` localized at `prod_{t in T} a_t U_t`, which is `Z[1/m_T]` when `u_j >= 0`
//! for every variable outside the supports of `U_t`, `t in T`, and zero
//! otherwise. Differentials are the signed inclusions `Z[1/m_T] -> Z[1/m_T']`.

use std::collections::BTreeMap;

use num::{BigInt, Zero};
use serde::Serialize;

use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::monomial::{CMonomialIdeal, ExponentVector};
use crate::plocal::ValMatrix;

/// A positive integer stored by its prime factorization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Factored(BTreeMap<u64, u32>);

impl Factored {
    pub fn one() -> Self {
        Factored::default()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn divisible_by(&self, p: u64) -> bool {
        self.0.contains_key(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn value(&self) -> BigInt {
        self.0.iter().map(|(&p, &e)| arith::pow(p, e)).product()
    }

    fn mul(&self, other: &Factored) -> Factored {
        let mut out = self.0.clone();
        for (&p, &e) in &other.0 {
            *out.entry(p).or_insert(0) += e;
        }
        Factored(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechSummand {
    /// Generator indices `T`, ascending.
    pub subset: Vec<usize>,
    /// `m_T = prod_{t in T} |a_t|`.
    pub inverted: Factored,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechSlice {
    pub degree: ExponentVector,
    /// `terms[k]` lists the active summands with `|T| = k`, `k = 0..=c`.
    pub terms: Vec<Vec<CechSummand>>,
    /// `differentials[k]` maps `terms[k]` to `terms[k + 1]` (rows index the target).
    pub differentials: Vec<Mat<i8>>,
}

/// Sort order of summands inside one term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SummandKind {
    /// `Z` localized at `p`.
    L,
    /// The rationals.
    Q,
}

/// Subsets of `{0..c}` grouped by size, each group in lexicographic order.
fn subsets_by_size(c: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); c + 1];
    for mask in 0..1usize << c {
        let s: Vec<usize> = (0..c).filter(|&j| mask & (1 << j) != 0).collect();
        out[s.len()].push(s);
    }
    for group in &mut out {
        group.sort();
    }
    out
}

/// Whether the summand for `subset` is nonzero in degree `u`.
fn is_active(ideal: &CMonomialIdeal, subset: &[usize], u: &ExponentVector) -> bool {
    let gens = ideal.generators();
    (0..ideal.n())
        .all(|j| u.entries()[j] >= 0 || subset.iter().any(|&t| gens[t].monomial.entries()[j] > 0))
}

/// `(-1)^{#(t in T : t < j)}`.
fn face_sign(subset: &[usize], j: usize) -> i8 {
    if subset.iter().filter(|&&t| t < j).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn build_slice(ideal: &CMonomialIdeal, u: &ExponentVector) -> Result<CechSlice> {
    if u.len() != ideal.n() {
        return Err(Error::LengthMismatch {
            what: "degree".into(),
            expected: ideal.n(),
            found: u.len(),
        });
    }
    let c = ideal.c();
    let factors: Vec<Factored> = ideal
        .generators()
        .iter()
        .map(|g| arith::factorize(&g.coefficient).map(Factored))
        .collect::<Result<_>>()?;

    let terms: Vec<Vec<CechSummand>> = subsets_by_size(c)
        .into_iter()
        .map(|group| {
            group
                .into_iter()
                .filter(|s| is_active(ideal, s, u))
                .map(|s| {
                    let inverted = s
                        .iter()
                        .fold(Factored::one(), |acc, &t| acc.mul(&factors[t]));
                    CechSummand {
                        subset: s,
                        inverted,
                    }
                })
                .collect()
        })
        .collect();

    let differentials = (0..c)
        .map(|k| {
            let (src, dst) = (&terms[k], &terms[k + 1]);
            let mut d = Mat::zeros(dst.len(), src.len());
            for (col, s) in src.iter().enumerate() {
                for j in (0..c).filter(|j| !s.subset.contains(j)) {
                    let mut bigger = s.subset.clone();
                    bigger.push(j);
                    bigger.sort();
                    if let Some(row) = dst.iter().position(|t| t.subset == bigger) {
                        d[(row, col)] = face_sign(&s.subset, j);
                    }
                }
            }
            d
        })
        .collect();

    Ok(CechSlice {
        degree: u.clone(),
        terms,
        differentials,
    })
}

impl CechSlice {
    /// Number of spots, `c + 1`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(Vec::is_empty)
    }

    /// Which subsets are active, term by term.
    pub fn pattern(&self) -> Vec<Vec<Vec<usize>>> {
        self.terms
            .iter()
            .map(|t| t.iter().map(|s| s.subset.clone()).collect())
            .collect()
    }

    pub fn localize_at(&self, p: u64) -> Result<PLocalComplex> {
        arith::ensure_prime(p)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                t.iter()
                    .map(|s| {
                        if s.inverted.divisible_by(p) {
                            SummandKind::Q
                        } else {
                            SummandKind::L
                        }
                    })
                    .collect()
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .map(|d| d.map(|&x| Rat::from_integer(BigInt::from(x))))
            .collect();
        PLocalComplex::new(p, terms, differentials)
    }

    pub fn rationalize(&self) -> RationalComplex {
        RationalComplex {
            dims: self.terms.iter().map(Vec::len).collect(),
            differentials: self
                .differentials
                .iter()
                .map(|d| d.map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    /// `C ⊗ Z/p^K`: summands with `p | m_T` vanish, the rest become `Z/p^K`.
    pub fn reduce_mod(&self, p: u64, k: u32) -> Result<ModularComplex> {
        arith::ensure_prime(p)?;
        if k == 0 {
            return Err(Error::NonpositiveK);
        }
        let modulus = arith::pow(p, k);
        let keep: Vec<Vec<usize>> = self
            .terms
            .iter()
            .map(|t| {
                (0..t.len())
                    .filter(|&j| !t[j].inverted.divisible_by(p))
                    .collect()
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                d.select(&keep[k + 1], &keep[k])
                    .map(|&x| num::Integer::mod_floor(&BigInt::from(x), &modulus))
            })
            .collect();
        Ok(ModularComplex {
            p,
            k,
            dims: keep.iter().map(Vec::len).collect(),
            differentials,
        })
    }
}

/// A cochain complex of finite direct sums of `L = Z_(p)` and `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLocalComplex {
    p: u64,
    terms: Vec<Vec<SummandKind>>,
    differentials: Vec<Mat<Rat>>,
}

impl PLocalComplex {
    /// Checks shapes, the morphism constraints (`Hom(Q, L) = 0`, p-integral
    /// `L -> L` entries) and `d ∘ d = 0`.
    pub fn new(p: u64, terms: Vec<Vec<SummandKind>>, differentials: Vec<Mat<Rat>>) -> Result<Self> {
        arith::ensure_prime(p)?;
        if differentials.len() + 1 != terms.len().max(1) {
            return Err(Error::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            ValMatrix::new(p, terms[k + 1].clone(), terms[k].clone(), d.clone())
                .map_err(|e| Error::InvalidComplex(format!("d^{k}: {e}")))?;
        }
        let c = PLocalComplex {
            p,
            terms,
            differentials,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, i: usize) -> &[SummandKind] {
        self.terms.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn terms(&self) -> &[Vec<SummandKind>] {
        &self.terms
    }

    pub fn differentials(&self) -> &[Mat<Rat>] {
        &self.differentials
    }

    /// `d^i : term i -> term i+1`, with zero maps off the ends.
    pub fn differential(&self, i: isize) -> ValMatrix {
        let src = if i >= 0 {
            self.term(i as usize).to_vec()
        } else {
            Vec::new()
        };
        let dst = self.term((i + 1) as usize).to_vec();
        let entries = if i >= 0 && (i as usize) < self.differentials.len() {
            self.differentials[i as usize].clone()
        } else {
            Mat::zeros(dst.len(), src.len())
        };
        ValMatrix::new(self.p, dst, src, entries).expect("validated at construction")
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (k, pair) in self.differentials.windows(2).enumerate() {
            if !pair[1].mul(&pair[0]).is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "d^{} ∘ d^{} is nonzero",
                    k + 1,
                    k
                )));
            }
        }
        Ok(())
    }

    /// Reindexes summand `j` of term `i` to position `perm[j]`.
    pub fn permute_term(&self, i: usize, perm: &[usize]) -> Result<Self> {
        let n = self.terms[i].len();
        assert_eq!(perm.len(), n);
        let mut inv = vec![0; n];
        for (j, &pj) in perm.iter().enumerate() {
            inv[pj] = j;
        }
        let mut terms = self.terms.clone();
        terms[i] = inv.iter().map(|&j| self.terms[i][j]).collect();
        let mut ds = self.differentials.clone();
        if i < ds.len() {
            let rows: Vec<usize> = (0..ds[i].rows()).collect();
            ds[i] = ds[i].select(&rows, &inv);
        }
        if i > 0 {
            let cols: Vec<usize> = (0..ds[i - 1].cols()).collect();
            ds[i - 1] = ds[i - 1].select(&inv, &cols);
        }
        PLocalComplex::new(self.p, terms, ds)
    }

    /// Changes coordinates on summand `j` of term `i` to `x' = factor * x`.
    /// The factor must be a unit of `Z_(p)` on an `L` summand; on a `Q`
    /// summand any nonzero rational is allowed.
    pub fn scale_summand(&self, i: usize, j: usize, factor: &Rat) -> Result<Self> {
        assert!(!factor.is_zero());
        if self.terms[i][j] == SummandKind::L && arith::valuation(factor, self.p) != Some(0) {
            return Err(Error::InvalidComplex(
                "L summands may only be rescaled by units".into(),
            ));
        }
        let mut ds = self.differentials.clone();
        if i < ds.len() {
            for r in 0..ds[i].rows() {
                ds[i][(r, j)] = &ds[i][(r, j)] / factor;
            }
        }
        if i > 0 {
            for c in 0..ds[i - 1].cols() {
                ds[i - 1][(j, c)] = &ds[i - 1][(j, c)] * factor;
            }
        }
        PLocalComplex::new(self.p, self.terms.clone(), ds)
    }

    /// `C ⊗ Z/p^K` for an arbitrary p-local complex.
    pub fn reduce_mod(&self, k: u32) -> Result<ModularComplex> {
        if k == 0 {
            return Err(Error::NonpositiveK);
        }
        let modulus = arith::pow(self.p, k);
        let keep: Vec<Vec<usize>> = self
            .terms
            .iter()
            .map(|t| (0..t.len()).filter(|&j| t[j] == SummandKind::L).collect())
            .collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                d.select(&keep[k + 1], &keep[k])
                    .map(|x| arith::reduce_p_integral(x, &modulus))
            })
            .collect();
        Ok(ModularComplex {
            p: self.p,
            k,
            dims: keep.iter().map(Vec::len).collect(),
            differentials,
        })
    }
}

/// Finite-dimensional rational vector spaces with integral differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalComplex {
    pub dims: Vec<usize>,
    pub differentials: Vec<Mat<BigInt>>,
}

/// Free `Z/p^K`-modules; entries are representatives in `[0, p^K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularComplex {
    pub p: u64,
    pub k: u32,
    pub dims: Vec<usize>,
    pub differentials: Vec<Mat<BigInt>>,
}

impl ModularComplex {
    pub fn modulus(&self) -> BigInt {
        arith::pow(self.p, self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// `d^i` with zero maps off the ends.
    pub fn differential(&self, i: isize) -> Mat<BigInt> {
        let dim = |j: isize| {
            if j >= 0 {
                self.dims.get(j as usize).copied().unwrap_or(0)
            } else {
                0
            }
        };
        if i >= 0 && (i as usize) < self.differentials.len() {
            self.differentials[i as usize].clone()
        } else {
            Mat::zeros(dim(i + 1), dim(i))
        }
    }
}
