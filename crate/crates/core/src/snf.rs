//! Smith normal form of integer matrices, with transforms.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::matrix::Mat;

/// `m = u · diag · v` with `u`, `v` unimodular; `diagonal` has
/// `min(rows, cols)` entries, nonnegative, each dividing the next nonzero one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSnf {
    pub diagonal: Vec<BigInt>,
    pub u: Mat<BigInt>,
    pub v: Mat<BigInt>,
}

struct Calc {
    a: Mat<BigInt>,
    u: Mat<BigInt>,
    v: Mat<BigInt>,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_rows(i, j);
    }

    /// row[dst] -= f * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.a.cols() {
            let s = f * &self.a[(src, j)];
            self.a[(dst, j)] -= s;
        }
        for i in 0..self.u.rows() {
            let s = f * &self.u[(i, dst)];
            self.u[(i, src)] += s;
        }
    }

    /// col[dst] -= f * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.a.rows() {
            let s = f * &self.a[(i, src)];
            self.a[(i, dst)] -= s;
        }
        for j in 0..self.v.cols() {
            let s = f * &self.v[(dst, j)];
            self.v[(src, j)] += s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols() {
            self.a[(i, j)] = -self.a[(i, j)].clone();
        }
        for r in 0..self.u.rows() {
            self.u[(r, i)] = -self.u[(r, i)].clone();
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for r in t..self.a.rows() {
            for c in t..self.a.cols() {
                let x = self.a[(r, c)].abs();
                if !x.is_zero() && best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                    best = Some((x, r, c));
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// Clears row and column `t` outside the pivot; returns false if a
    /// smaller remainder had to be moved into the pivot.
    fn clear_cross(&mut self, t: usize) -> bool {
        for r in t + 1..self.a.rows() {
            let q = self.a[(r, t)].div_floor(&self.a[(t, t)]);
            if !q.is_zero() {
                self.row_axpy(r, t, &q);
            }
            if !self.a[(r, t)].is_zero() {
                self.swap_rows(t, r);
                return false;
            }
        }
        for c in t + 1..self.a.cols() {
            let q = self.a[(t, c)].div_floor(&self.a[(t, t)]);
            if !q.is_zero() {
                self.col_axpy(c, t, &q);
            }
            if !self.a[(t, c)].is_zero() {
                self.swap_cols(t, c);
                return false;
            }
        }
        true
    }
}

pub fn smith(m: &Mat<BigInt>) -> IntSnf {
    let (rows, cols) = m.shape();
    let mut calc = Calc {
        a: m.clone(),
        u: Mat::identity(rows),
        v: Mat::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((r, c)) = calc.smallest_nonzero(t) else {
            break;
        };
        calc.swap_rows(t, r);
        calc.swap_cols(t, c);
        while !calc.clear_cross(t) {}
        // Divisibility: fold a row holding a non-multiple into the pivot row.
        let pivot = calc.a[(t, t)].clone();
        let offender =
            (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !calc.a[(r, c)].is_multiple_of(&pivot)));
        if let Some(r) = offender {
            calc.row_axpy(t, r, &-BigInt::one());
            continue;
        }
        if calc.a[(t, t)].is_negative() {
            calc.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols))
        .map(|i| calc.a[(i, i)].clone())
        .collect();
    IntSnf {
        diagonal,
        u: calc.u,
        v: calc.v,
    }
}
