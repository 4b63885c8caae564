//! Homological algebra over `L = Z_(p)` in the category of finite direct
//! sums of `L` and `Q`.
//!
//! A homology object is reported as a [`PElem`], the isomorphism class
//! `L^a ⊕ Q^b ⊕ E(p)^ℓ ⊕ ⊕_j Z/p^{β_j}` with `E(p) = Q/L` the Prüfer group.

pub mod oracle;

use std::fmt;

use log::trace;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rat};
use crate::cech::{PLocalComplex, SummandKind};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat;

pub use oracle::{finite_approx, uct_predict, FiniteGroup};

/// Isomorphism class of a p-local module of the four summand kinds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PElem {
    pub p: u64,
    /// `a`: copies of `L`.
    pub free: usize,
    /// `b`: copies of `Q`.
    pub divfree: usize,
    /// `ℓ`: copies of `E(p)`.
    pub prufer: usize,
    /// `β_j >= 1`, ascending: summands `Z/p^{β_j}`.
    pub torsion: Vec<u32>,
}

impl PElem {
    pub fn zero(p: u64) -> Self {
        PElem {
            p,
            free: 0,
            divfree: 0,
            prufer: 0,
            torsion: Vec::new(),
        }
    }

    pub fn new(p: u64, free: usize, divfree: usize, prufer: usize, mut torsion: Vec<u32>) -> Self {
        assert!(
            torsion.iter().all(|&b| b >= 1),
            "torsion exponents must be positive"
        );
        torsion.sort_unstable();
        PElem {
            p,
            free,
            divfree,
            prufer,
            torsion,
        }
    }

    /// `t`, the number of finite cyclic summands.
    pub fn t(&self) -> usize {
        self.torsion.len()
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.divfree == 0 && self.prufer == 0 && self.torsion.is_empty()
    }

    /// Rank after tensoring with `Q`.
    pub fn rational_rank(&self) -> usize {
        self.free + self.divfree
    }
}

/// Fixed table vocabulary: `L(p)`, `Q`, `E(p)` with `^count`, and `p^β` for
/// each finite cyclic summand.
impl fmt::Display for PElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        let mut parts = Vec::new();
        if self.free > 0 {
            parts.push(format!("L({p})^{}", self.free));
        }
        if self.divfree > 0 {
            parts.push(format!("Q^{}", self.divfree));
        }
        if self.prufer > 0 {
            parts.push(format!("E({p})^{}", self.prufer));
        }
        parts.extend(self.torsion.iter().map(|b| format!("{p}^{b}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A morphism between sums of `L` and `Q`, rows indexing the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValMatrix {
    p: u64,
    rows: Vec<SummandKind>,
    cols: Vec<SummandKind>,
    entries: Mat<Rat>,
}

impl ValMatrix {
    pub fn new(
        p: u64,
        rows: Vec<SummandKind>,
        cols: Vec<SummandKind>,
        entries: Mat<Rat>,
    ) -> Result<Self> {
        if entries.shape() != (rows.len(), cols.len()) {
            return Err(Error::InvalidComplex(format!(
                "matrix is {:?} but summands are {}x{}",
                entries.shape(),
                rows.len(),
                cols.len()
            )));
        }
        for ((r, c), x) in entries.iter() {
            match (rows[r], cols[c]) {
                (SummandKind::L, SummandKind::Q) if !x.is_zero() => {
                    return Err(Error::InvalidComplex(format!(
                        "nonzero map Q -> L at ({r}, {c})"
                    )));
                }
                (SummandKind::L, SummandKind::L) if !arith::is_p_integral(x, p) => {
                    return Err(Error::ValuationViolation { row: r, col: c, p });
                }
                _ => {}
            }
        }
        Ok(ValMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> &[SummandKind] {
        &self.rows
    }

    pub fn cols(&self) -> &[SummandKind] {
        &self.cols
    }

    pub fn entries(&self) -> &Mat<Rat> {
        &self.entries
    }
}

fn indices_of(kinds: &[SummandKind], kind: SummandKind) -> Vec<usize> {
    (0..kinds.len()).filter(|&i| kinds[i] == kind).collect()
}

/// `m = u · d · v` over `Z_(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSnf {
    pub u: Mat<Rat>,
    pub d: Mat<Rat>,
    pub v: Mat<Rat>,
    /// Valuations of the nonzero diagonal entries, ascending.
    pub exponents: Vec<u32>,
}

impl LocalSnf {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

/// Smith normal form over the discrete valuation ring `Z_(p)`.
///
/// Pivots are chosen by minimal valuation, ties broken by smallest
/// `(row, col)`, so the transforms are deterministic.
pub fn local_snf(m: &Mat<Rat>, p: u64) -> Result<LocalSnf> {
    if let Some(((row, col), _)) = m.iter().find(|(_, x)| !arith::is_p_integral(x, p)) {
        return Err(Error::ValuationViolation { row, col, p });
    }
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u: Mat<Rat> = Mat::identity(rows);
    let mut v: Mat<Rat> = Mat::identity(cols);
    let mut exponents = Vec::new();

    for t in 0..rows.min(cols) {
        let mut best: Option<(i64, usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if let Some(val) = arith::valuation(&a[(r, c)], p) {
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, r, c));
                    }
                }
            }
        }
        let Some((e, r, c)) = best else { break };
        a.swap_rows(t, r);
        u.swap_cols(t, r);
        a.swap_cols(t, c);
        v.swap_rows(t, c);

        let power = arith::p_power(p, e);
        let unit = &a[(t, t)] / &power;
        let unit_inv = unit.recip();
        for j in t..cols {
            a[(t, j)] = &a[(t, j)] * &unit_inv;
        }
        for i in 0..rows {
            u[(i, t)] = &u[(i, t)] * &unit;
        }

        for r in t + 1..rows {
            if a[(r, t)].is_zero() {
                continue;
            }
            let f = &a[(r, t)] / &a[(t, t)];
            for j in t..cols {
                let s = &f * &a[(t, j)];
                a[(r, j)] -= s;
            }
            for i in 0..rows {
                let s = &f * &u[(i, r)];
                u[(i, t)] += s;
            }
        }
        for c in t + 1..cols {
            if a[(t, c)].is_zero() {
                continue;
            }
            let g = &a[(t, c)] / &a[(t, t)];
            a[(t, c)] = Rat::zero();
            for j in 0..cols {
                let s = &g * &v[(c, j)];
                v[(t, j)] += s;
            }
        }
        exponents.push(e as u32);
    }
    Ok(LocalSnf {
        u,
        d: a,
        v,
        exponents,
    })
}

/// Generators of `ker f ≅ L^s ⊕ Q^t` inside the source of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    /// `s`: the first `s` columns of `basis` span an `L`-lattice.
    pub free: usize,
    /// `t`: the last `t` columns span the divisible part over `Q`.
    pub divisible: usize,
    pub basis: Mat<Rat>,
}

/// Kernel of a morphism of sums of `L` and `Q`.
///
/// The divisible part is the rational kernel on the `Q` coordinates. The
/// lattice part is the saturation `L^s ∩ V`, where `V` is the projection of
/// the rational kernel to the `L` coordinates, with each generator lifted
/// by solving for its `Q` coordinates.
pub fn kernel_basis(f: &ValMatrix) -> Result<KernelBasis> {
    let p = f.p;
    let l_src = indices_of(&f.cols, SummandKind::L);
    let q_src = indices_of(&f.cols, SummandKind::Q);
    let q_dst = indices_of(&f.rows, SummandKind::Q);
    let all_rows: Vec<usize> = (0..f.rows.len()).collect();

    let src_order: Vec<usize> = l_src.iter().chain(&q_src).copied().collect();
    let full = linalg::nullspace(&f.entries.select(&all_rows, &src_order));
    let l_part = full.select(
        &(0..l_src.len()).collect::<Vec<_>>(),
        &(0..full.cols()).collect::<Vec<_>>(),
    );
    let v_basis = linalg::column_basis(&l_part);
    let r = v_basis.cols();

    let saturated = if r == 0 {
        Mat::zeros(l_src.len(), 0)
    } else {
        let scaled = Mat::from_fn(v_basis.rows(), r, |i, j| {
            let min_val = (0..v_basis.rows())
                .filter_map(|k| arith::valuation(&v_basis[(k, j)], p))
                .min()
                .unwrap_or(0);
            &v_basis[(i, j)] * arith::p_power(p, -min_val)
        });
        let snf = local_snf(&scaled, p)?;
        snf.u.select(
            &(0..l_src.len()).collect::<Vec<_>>(),
            &(0..r).collect::<Vec<_>>(),
        )
    };

    let b = f.entries.select(&q_dst, &l_src);
    let cq = f.entries.select(&q_dst, &q_src);
    let divisible = linalg::nullspace(&cq);
    let t = divisible.cols();

    let mut basis = Mat::zeros(f.cols.len(), r + t);
    for k in 0..r {
        let x = Mat::from_columns(l_src.len(), &[saturated.column(k)]);
        let rhs: Vec<Rat> = b.mul(&x).column(0).into_iter().map(|e| -e).collect();
        let y = linalg::solve(&cq, &rhs).expect("projection of the kernel lifts");
        for (i, &src) in l_src.iter().enumerate() {
            basis[(src, k)] = saturated[(i, k)].clone();
        }
        for (i, &src) in q_src.iter().enumerate() {
            basis[(src, k)] = y[i].clone();
        }
    }
    for k in 0..t {
        for (i, &src) in q_src.iter().enumerate() {
            basis[(src, r + k)] = divisible[(i, k)].clone();
        }
    }
    trace!("kernel basis at p={p}: s={r} t={t} {basis:?}");
    Ok(KernelBasis {
        free: r,
        divisible: t,
        basis,
    })
}

/// Homology `ker d^i / im d^{i-1}` of a p-local complex.
///
/// The image is expressed in kernel coordinates. Images of `Q` summands
/// span a subspace `W` of the divisible part; images of `L` summands give a
/// finitely generated module with lattice block `X` and divisible block `Y`.
/// A local Smith form of `X` (rows only combined `L -> L` and `L -> Q`)
/// yields the finite torsion from its non-unit pivots and leaves the
/// generators `Y · ker X` lying purely in the divisible part, which cut
/// out the Prüfer summands modulo `W`.
pub fn homology_at(c: &PLocalComplex, i: usize) -> Result<PElem> {
    c.check_square_zero()?;
    let p = c.p();
    let outgoing = c.differential(i as isize);
    let kernel = kernel_basis(&outgoing)?;
    let incoming = c.differential(i as isize - 1);
    let (s, t) = (kernel.free, kernel.divisible);

    let mut lattice_cols = Vec::new();
    let mut divisible_cols = Vec::new();
    let mut subspace_cols = Vec::new();
    for (j, kind) in incoming.cols().iter().enumerate() {
        let col = incoming.entries().column(j);
        let coords =
            linalg::solve(&kernel.basis, &col).ok_or(Error::InconsistentImage { spot: i })?;
        let (l_coords, q_coords) = coords.split_at(s);
        match kind {
            SummandKind::L => {
                if l_coords.iter().any(|x| !arith::is_p_integral(x, p)) {
                    return Err(Error::InconsistentImage { spot: i });
                }
                lattice_cols.push(l_coords.to_vec());
                divisible_cols.push(q_coords.to_vec());
            }
            SummandKind::Q => {
                if l_coords.iter().any(|x| !x.is_zero()) {
                    return Err(Error::InconsistentImage { spot: i });
                }
                subspace_cols.push(q_coords.to_vec());
            }
        }
    }
    let x = Mat::from_columns(s, &lattice_cols);
    let y = Mat::from_columns(t, &divisible_cols);
    let w = Mat::from_columns(t, &subspace_cols);

    let snf = local_snf(&x, p)?;
    let torsion: Vec<u32> = snf.exponents.iter().copied().filter(|&e| e > 0).collect();
    let leftover = y.mul(&linalg::nullspace(&x));
    let rank_w = linalg::rank(&w);
    let rank_all = linalg::rank(&w.hcat(&leftover));
    trace!(
        "H^{i} at p={p}: kernel s={s} t={t}; lattice pivots {:?}; dim W={rank_w}; dim W+lattice={rank_all}",
        snf.exponents
    );
    Ok(PElem::new(
        p,
        s - snf.rank(),
        t - rank_all,
        rank_all - rank_w,
        torsion,
    ))
}

/// Homology at every spot of a complex.
pub fn homology_all(c: &PLocalComplex) -> Result<Vec<PElem>> {
    (0..c.len()).map(|i| homology_at(c, i)).collect()
}
