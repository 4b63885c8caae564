//! Rational ranks `α(u) = dim_Q H^i_I(R)_u ⊗ Q` and their block tables.

use std::collections::BTreeMap;

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use crate::cech::{build_slice, RationalComplex};
use crate::error::Result;
use crate::matrix::Mat;
use crate::monomial::{blocks, Block, CMonomialIdeal, ExponentVector};

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank(m: &Mat<BigInt>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !a[(k, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, k);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let x = &a[(r, c)] * &a[(i, j)] - &a[(i, c)] * &a[(r, j)];
                a[(i, j)] = x / &prev;
            }
            a[(i, c)] = BigInt::zero();
        }
        prev = a[(r, c)].clone();
        r += 1;
    }
    r
}

impl RationalComplex {
    /// `dim H^i`; spots outside the complex are zero.
    pub fn homology_rank(&self, i: usize) -> usize {
        let Some(&dim) = self.dims.get(i) else {
            return 0;
        };
        let out = self.differentials.get(i).map_or(0, rank);
        let inc = if i > 0 {
            self.differentials.get(i - 1).map_or(0, rank)
        } else {
            0
        };
        dim - out - inc
    }

    pub fn homology_ranks(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|i| self.homology_rank(i))
            .collect()
    }
}

pub fn alpha(ideal: &CMonomialIdeal, i: usize, u: &ExponentVector) -> Result<usize> {
    Ok(build_slice(ideal, u)?.rationalize().homology_rank(i))
}

/// `α` on each of the `2^n` blocks, evaluated at the representatives in `{0,-1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaTable {
    pub i: usize,
    pub entries: BTreeMap<Block, usize>,
}

impl AlphaTable {
    pub fn get(&self, u: &ExponentVector) -> usize {
        self.entries[&Block::of(u)]
    }

    /// JSON map from sign pattern (`"+-"`: `u_1 >= 0`, `u_2 <= -1`) to `α`.
    pub fn to_json_map(&self) -> BTreeMap<String, usize> {
        self.entries
            .iter()
            .map(|(b, &a)| (b.pattern(), a))
            .collect()
    }

    pub fn distinct_values(&self) -> usize {
        let mut vals: Vec<usize> = self.entries.values().copied().collect();
        vals.sort_unstable();
        vals.dedup();
        vals.len()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlphaTableJson(pub BTreeMap<String, usize>);

pub fn alpha_table(ideal: &CMonomialIdeal, i: usize) -> Result<AlphaTable> {
    let entries = blocks(ideal.n())
        .into_iter()
        .map(|b| {
            let a = alpha(ideal, i, &b.representative())?;
            Ok((b, a))
        })
        .collect::<Result<_>>()?;
    Ok(AlphaTable { i, entries })
}
