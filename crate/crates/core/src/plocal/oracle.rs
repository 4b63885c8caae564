//! Finite-coefficient oracle: homology of `C ⊗ Z/p^K` by integer Smith
//! forms, and the universal-coefficient prediction of that homology from
//! p-local structures.

use std::fmt;

use num::{BigInt, Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cech::ModularComplex;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::snf::smith;

use super::PElem;

/// A finite abelian p-group `⊕_j Z/p^{γ_j}`, exponents ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub p: u64,
    pub exponents: Vec<u32>,
}

impl FiniteGroup {
    pub fn new(p: u64, mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable();
        FiniteGroup { p, exponents }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|e| format!("Z/{}^{}", self.p, e))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Homology at every spot of a complex of free `Z/p^K`-modules.
///
/// With `d^i = U D V`, the kernel of `d^i` mod `p^K` in coordinates `y = V x`
/// is generated by `g_j e_j` where `g_j = p^K / gcd(D_j, p^K)`. Writing the
/// image of `d^{i-1}` in those generators and adjoining the relations
/// `(p^K / g_j) e_j` gives a presentation whose Smith form lists the
/// cyclic factors.
pub fn finite_approx(c: &ModularComplex) -> Result<Vec<FiniteGroup>> {
    let modulus = c.modulus();
    for i in 0..c.differentials.len().saturating_sub(1) {
        let dd = c
            .differential(i as isize + 1)
            .mul(&c.differential(i as isize));
        if dd.iter().any(|(_, x)| !x.is_multiple_of(&modulus)) {
            return Err(Error::InvalidComplex(format!(
                "d^{} ∘ d^{} is nonzero mod p^K",
                i + 1,
                i
            )));
        }
    }
    (0..c.dims.len())
        .map(|i| homology_mod(c, i, &modulus))
        .collect()
}

fn homology_mod(c: &ModularComplex, i: usize, modulus: &BigInt) -> Result<FiniteGroup> {
    let n = c.dims[i];
    let outgoing = c.differential(i as isize);
    let snf = smith(&outgoing);
    let gens: Vec<BigInt> = (0..n)
        .map(|j| match snf.diagonal.get(j) {
            Some(d) => modulus / d.gcd(modulus),
            None => BigInt::one(),
        })
        .collect();

    let image = snf.v.mul(&c.differential(i as isize - 1));
    let mut relations = Mat::zeros(n, n + image.cols());
    for j in 0..n {
        relations[(j, j)] = modulus / &gens[j];
        for k in 0..image.cols() {
            let (q, r) = image[(j, k)].div_rem(&gens[j]);
            if !r.is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "image at spot {i} is not in the kernel mod p^K"
                )));
            }
            relations[(j, n + k)] = q;
        }
    }
    let exponents = smith(&relations)
        .diagonal
        .iter()
        .map(|d| {
            let e = arith::int_valuation(d, c.p).expect("relation matrix has full rank");
            debug_assert_eq!(
                *d,
                arith::pow(c.p, e),
                "invariant factor is not a power of p"
            );
            e
        })
        .collect();
    Ok(FiniteGroup::new(c.p, exponents))
}

/// Universal-coefficient prediction for `H^i(C ⊗ Z/p^K)`:
/// `H^i/p^K ⊕ Tor(H^{i+1}, Z/p^K)`, that is
/// `(Z/p^K)^{a_i + ℓ_{i+1}} ⊕ ⊕ Z/p^{min(β, K)}` over the torsion of `H^i`
/// and `H^{i+1}`. `Q` and `E(p)` contribute nothing to the tensor part.
pub fn uct_predict(structures: &[PElem], k: u32) -> Vec<FiniteGroup> {
    let Some(p) = structures.first().map(|s| s.p) else {
        return Vec::new();
    };
    (0..structures.len())
        .map(|i| {
            let here = &structures[i];
            let next = structures.get(i + 1);
            let mut exps = vec![k; here.free + next.map_or(0, |s| s.prufer)];
            exps.extend(here.torsion.iter().map(|&b| b.min(k)));
            if let Some(next) = next {
                exps.extend(next.torsion.iter().map(|&b| b.min(k)));
            }
            FiniteGroup::new(p, exps)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(p: u64, k: u32, dims: Vec<usize>, ds: Vec<Vec<Vec<i64>>>) -> ModularComplex {
        let differentials = ds
            .into_iter()
            .enumerate()
            .map(|(i, rows)| {
                let cols = dims[i];
                Mat::from_rows(
                    rows.into_iter()
                        .map(|r| r.into_iter().map(BigInt::from).collect())
                        .collect(),
                    cols,
                )
            })
            .collect();
        ModularComplex {
            p,
            k,
            dims,
            differentials,
        }
    }

    #[test]
    fn kernel_of_zero_map() {
        let c = complex(2, 3, vec![1, 0], vec![vec![]]);
        let h = finite_approx(&c).unwrap();
        assert_eq!(
            h,
            vec![FiniteGroup::new(2, vec![3]), FiniteGroup::new(2, vec![])]
        );
    }

    #[test]
    fn multiplication_by_p() {
        let c = complex(3, 2, vec![1, 1], vec![vec![vec![3]]]);
        let h = finite_approx(&c).unwrap();
        assert_eq!(
            h,
            vec![FiniteGroup::new(3, vec![1]), FiniteGroup::new(3, vec![1])]
        );
    }

    #[test]
    fn zero_complex() {
        let c = complex(5, 4, vec![0, 0, 0], vec![vec![], vec![]]);
        assert!(finite_approx(&c)
            .unwrap()
            .iter()
            .all(FiniteGroup::is_trivial));
    }

    #[test]
    fn three_term_exact() {
        // Z/4 -> Z/4^2 -> Z/4 with d0 = (1,1), d1 = (1,-1): exact everywhere.
        let c = complex(
            2,
            2,
            vec![1, 2, 1],
            vec![vec![vec![1], vec![1]], vec![vec![1, 3]]],
        );
        let h = finite_approx(&c).unwrap();
        assert!(h.iter().all(FiniteGroup::is_trivial), "{h:?}");
    }

    #[test]
    fn rejects_non_complex() {
        let c = complex(2, 2, vec![1, 1, 1], vec![vec![vec![1]], vec![vec![1]]]);
        assert!(matches!(finite_approx(&c), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn uct_examples() {
        let h = vec![PElem::zero(2), PElem::new(2, 0, 0, 1, vec![])];
        assert_eq!(
            uct_predict(&h, 3),
            vec![FiniteGroup::new(2, vec![3]), FiniteGroup::new(2, vec![])]
        );

        let h = vec![PElem::zero(2), PElem::new(2, 0, 0, 0, vec![2])];
        assert_eq!(
            uct_predict(&h, 3),
            vec![FiniteGroup::new(2, vec![2]), FiniteGroup::new(2, vec![2])]
        );

        let h = vec![PElem::zero(7), PElem::zero(7)];
        assert!(uct_predict(&h, 5).iter().all(FiniteGroup::is_trivial));
    }
}
