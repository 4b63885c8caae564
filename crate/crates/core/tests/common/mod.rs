//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use lcstruct::arith::Rat;
use lcstruct::linalg;
use lcstruct::{
    CMonomialIdeal, ExponentVector, Mat, ModularComplex, PElem, PLocalComplex, SummandKind,
};
use num::{BigInt, Integer, One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub const COEFFICIENTS: [i64; 6] = [1, 2, 3, 4, 6, 12];

pub fn deg(v: &[i64]) -> ExponentVector {
    ExponentVector::new(v.to_vec())
}

pub fn q(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn random_monomials(rng: &mut impl Rng, n: usize, c: usize, max_exp: i64) -> Vec<Vec<i64>> {
    (0..c)
        .map(|_| loop {
            let m: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
            if m.iter().any(|&e| e > 0) {
                break m;
            }
        })
        .collect()
}

/// `n <= max_n` variables, `c <= max_c` generators, exponents in `[0, 3]`.
pub fn random_usual(rng: &mut impl Rng, max_n: usize, max_c: usize) -> CMonomialIdeal {
    let n = rng.gen_range(1..=max_n);
    let c = rng.gen_range(1..=max_c);
    CMonomialIdeal::usual(n, random_monomials(rng, n, c, 3)).unwrap()
}

/// Like [`random_usual`], coefficients drawn from `coefficients` with random signs.
pub fn random_c_ideal(
    rng: &mut impl Rng,
    max_n: usize,
    max_c: usize,
    coefficients: &[i64],
) -> CMonomialIdeal {
    let n = rng.gen_range(1..=max_n);
    let c = rng.gen_range(1..=max_c);
    let gens = random_monomials(rng, n, c, 3)
        .into_iter()
        .map(|m| {
            let a = *coefficients.choose(rng).unwrap();
            (if rng.gen_bool(0.2) { -a } else { a }, m)
        })
        .collect();
    CMonomialIdeal::new(n, gens).unwrap()
}

pub fn random_degree(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> ExponentVector {
    ExponentVector::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

/// Every integer vector in `[lo, hi]^n`, lexicographically.
pub fn box_points(n: usize, lo: i64, hi: i64) -> Vec<ExponentVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out.into_iter().map(ExponentVector::new).collect()
}

/// `m` lies in the monomial ideal generated by `gens` iff some generator divides it.
pub fn monomial_member(gens: &[Vec<i64>], m: &[i64]) -> bool {
    gens.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b))
}

pub fn exponent_lists(ideal: &CMonomialIdeal) -> Vec<Vec<i64>> {
    ideal
        .generators()
        .iter()
        .map(|g| g.monomial.entries().to_vec())
        .collect()
}

/// Elementary pieces of a p-local complex, each with a known homology.
#[derive(Clone, Copy, Debug)]
pub enum Piece {
    /// A lone summand at spot `i`.
    Lone(usize, SummandKind),
    /// `L --p^e--> L` from `i` to `i + 1`.
    Mult(usize, u32),
    /// `L --1--> Q`.
    Incl(usize),
    /// `Q --1--> Q`.
    QIso(usize),
    /// `L --(p^e, 1)--> L ⊕ Q`.
    Pair(usize, u32),
}

impl Piece {
    fn start(self) -> usize {
        match self {
            Piece::Lone(i, _)
            | Piece::Mult(i, _)
            | Piece::Incl(i)
            | Piece::QIso(i)
            | Piece::Pair(i, _) => i,
        }
    }
}

pub fn random_pieces(rng: &mut impl Rng, len: usize, count: usize) -> Vec<Piece> {
    (0..count)
        .map(|_| {
            let i = rng.gen_range(0..len);
            let kind = if rng.gen_bool(0.5) {
                SummandKind::L
            } else {
                SummandKind::Q
            };
            if i + 1 == len {
                return Piece::Lone(i, kind);
            }
            match rng.gen_range(0..5) {
                0 => Piece::Lone(i, kind),
                1 => Piece::Mult(i, rng.gen_range(0..=3)),
                2 => Piece::Incl(i),
                3 => Piece::QIso(i),
                _ => Piece::Pair(i, rng.gen_range(0..=2)),
            }
        })
        .collect()
}

/// Homology of a direct sum of pieces.
pub fn expected_homology(p: u64, len: usize, pieces: &[Piece]) -> Vec<PElem> {
    let mut out = vec![PElem::zero(p); len];
    for &piece in pieces {
        match piece {
            Piece::Lone(i, SummandKind::L) => out[i].free += 1,
            Piece::Lone(i, SummandKind::Q) => out[i].divfree += 1,
            Piece::Mult(i, e) if e > 0 => out[i + 1].torsion.push(e),
            Piece::Mult(..) | Piece::QIso(_) => {}
            Piece::Incl(i) => out[i + 1].prufer += 1,
            Piece::Pair(i, e) => {
                out[i + 1].divfree += 1;
                if e > 0 {
                    out[i + 1].torsion.push(e);
                }
            }
        }
    }
    for e in &mut out {
        e.torsion.sort_unstable();
    }
    out
}

/// The direct sum of `pieces`, summands in piece order.
pub fn assemble(p: u64, len: usize, pieces: &[Piece]) -> PLocalComplex {
    use SummandKind::{L, Q};
    let mut terms: Vec<Vec<SummandKind>> = vec![Vec::new(); len];
    // (spot, source index, target index, value)
    let mut entries: Vec<(usize, usize, usize, Rat)> = Vec::new();
    let pp = Rat::from_integer(BigInt::from(p));
    for &piece in pieces {
        let i = piece.start();
        let push = |terms: &mut Vec<Vec<SummandKind>>, spot: usize, k: SummandKind| {
            terms[spot].push(k);
            terms[spot].len() - 1
        };
        match piece {
            Piece::Lone(i, k) => {
                push(&mut terms, i, k);
            }
            Piece::Mult(_, e) => {
                let s = push(&mut terms, i, L);
                let t = push(&mut terms, i + 1, L);
                entries.push((i, s, t, num::pow(pp.clone(), e as usize)));
            }
            Piece::Incl(_) | Piece::QIso(_) => {
                let s = push(
                    &mut terms,
                    i,
                    if matches!(piece, Piece::Incl(_)) {
                        L
                    } else {
                        Q
                    },
                );
                let t = push(&mut terms, i + 1, Q);
                entries.push((i, s, t, Rat::one()));
            }
            Piece::Pair(_, e) => {
                let s = push(&mut terms, i, L);
                let t1 = push(&mut terms, i + 1, L);
                let t2 = push(&mut terms, i + 1, Q);
                entries.push((i, s, t1, num::pow(pp.clone(), e as usize)));
                entries.push((i, s, t2, Rat::one()));
            }
        }
    }
    let mut ds: Vec<Mat<Rat>> = (0..len.saturating_sub(1))
        .map(|i| Mat::zeros(terms[i + 1].len(), terms[i].len()))
        .collect();
    for (i, s, t, x) in entries {
        ds[i] = Mat::from_fn(ds[i].rows(), ds[i].cols(), |r, c| {
            if (r, c) == (t, s) {
                x.clone()
            } else {
                ds[i][(r, c)].clone()
            }
        });
    }
    PLocalComplex::new(p, terms, ds).unwrap()
}

fn random_rational(rng: &mut impl Rng) -> Rat {
    let den = *[1i64, 2, 3, 4, 5, 6, 8, 9].choose(rng).unwrap();
    Rat::new(BigInt::from(rng.gen_range(-4..=4)), BigInt::from(den))
}

/// A unit of `Z_(p)`: a ratio of small integers prime to `p`.
fn random_unit(rng: &mut impl Rng, p: u64) -> Rat {
    let pick = |rng: &mut _| loop {
        let x: i64 = Rng::gen_range(rng, 1..=7);
        if !(x as u64).is_multiple_of(p) {
            break if Rng::gen_bool(rng, 0.5) { x } else { -x };
        }
    };
    Rat::new(BigInt::from(pick(rng)), BigInt::from(pick(rng)))
}

/// A random automorphism of a sum of `L`s and `Q`s (rows = new coordinates).
pub fn random_automorphism(rng: &mut impl Rng, p: u64, kinds: &[SummandKind]) -> Mat<Rat> {
    let n = kinds.len();
    let mut a = Mat::<Rat>::identity(n);
    if n == 0 {
        return a;
    }
    for _ in 0..2 * n + 2 {
        let r = rng.gen_range(0..n);
        if rng.gen_bool(0.3) {
            let f = match kinds[r] {
                SummandKind::L => random_unit(rng, p),
                SummandKind::Q => loop {
                    let f = random_rational(rng)
                        * Rat::from_integer(BigInt::from(p)).pow(rng.gen_range(-2..=2));
                    if !f.is_zero() {
                        break f;
                    }
                },
            };
            a = Mat::from_fn(n, n, |i, j| {
                if i == r {
                    &a[(i, j)] * &f
                } else {
                    a[(i, j)].clone()
                }
            });
            continue;
        }
        let s = rng.gen_range(0..n);
        if s == r || (kinds[r] == SummandKind::L && kinds[s] == SummandKind::Q) {
            continue;
        }
        let f = match kinds[r] {
            SummandKind::L => q(rng.gen_range(-3..=3)),
            SummandKind::Q => random_rational(rng),
        };
        // row r += f * row s
        a = Mat::from_fn(n, n, |i, j| {
            if i == r {
                &a[(i, j)] + &f * &a[(s, j)]
            } else {
                a[(i, j)].clone()
            }
        });
    }
    a
}

/// `d'^i = A_{i+1} d^i A_i^{-1}` for random automorphisms `A_i`.
pub fn conjugate(rng: &mut impl Rng, c: &PLocalComplex) -> PLocalComplex {
    let autos: Vec<Mat<Rat>> = c
        .terms()
        .iter()
        .map(|t| random_automorphism(rng, c.p(), t))
        .collect();
    let ds = c
        .differentials()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            autos[i + 1]
                .mul(d)
                .mul(&linalg::inverse(&autos[i]).unwrap())
        })
        .collect();
    PLocalComplex::new(c.p(), c.terms().to_vec(), ds).unwrap()
}

/// Homology of a small complex of free `Z/p^K`-modules by enumeration:
/// `|H[p^j]| = #{x ∈ ker : p^j x ∈ im} / |im|` determines the cyclic factors.
/// `None` if a term is too large to enumerate.
pub fn brute_finite_homology(c: &ModularComplex) -> Option<Vec<Vec<u32>>> {
    let modulus = c.modulus().to_u64()?;
    let p = c.p;
    if c.dims
        .iter()
        .any(|&d| (modulus as f64).powi(d as i32) > 5000.0)
    {
        return None;
    }
    let vectors = |dim: usize| -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| (0..modulus).map(move |x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        out
    };
    let apply = |i: isize, x: &[u64]| -> Vec<u64> {
        let d = c.differential(i);
        (0..d.rows())
            .map(|r| {
                let s: BigInt = (0..d.cols()).map(|j| &d[(r, j)] * BigInt::from(x[j])).sum();
                s.mod_floor(&BigInt::from(modulus)).to_u64().unwrap()
            })
            .collect()
    };
    let mut out = Vec::new();
    for i in 0..c.dims.len() {
        let ker: Vec<Vec<u64>> = vectors(c.dims[i])
            .into_iter()
            .filter(|x| apply(i as isize, x).iter().all(|&y| y == 0))
            .collect();
        let src = if i == 0 {
            vec![Vec::new()]
        } else {
            vectors(c.dims[i - 1])
        };
        let im: BTreeSet<Vec<u64>> = src
            .iter()
            .map(|y| {
                if i == 0 {
                    vec![0; c.dims[i]]
                } else {
                    apply(i as isize - 1, y)
                }
            })
            .collect();
        let mut logs = vec![0u32];
        let mut j_pow = 1u64;
        for _ in 0..c.k {
            j_pow *= p;
            let count = ker
                .iter()
                .filter(|x| im.contains(&x.iter().map(|v| v * j_pow % modulus).collect::<Vec<_>>()))
                .count();
            let size = count / im.len();
            logs.push((size as f64).log(p as f64).round() as u32);
        }
        // logs[j] - logs[j-1] = number of factors of exponent >= j
        let mut exps = Vec::new();
        for j in 1..logs.len() {
            let at_least = logs[j] - logs[j - 1];
            let at_least_next = if j + 1 < logs.len() {
                logs[j + 1] - logs[j]
            } else {
                0
            };
            exps.extend(std::iter::repeat_n(
                j as u32,
                (at_least - at_least_next) as usize,
            ));
        }
        out.push(exps);
    }
    Some(out)
}
