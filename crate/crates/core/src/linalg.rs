//! Exact linear algebra over the rationals.

use num::{One, Zero};

use crate::arith::Rat;
use crate::matrix::Mat;

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref(m: &Mat<Rat>) -> (Mat<Rat>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !a[(k, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, k);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let t = &f * &a[(r, j)];
                a[(i, j)] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Mat<Rat>) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space, as the columns of a `cols x k` matrix.
pub fn nullspace(m: &Mat<Rat>) -> Mat<Rat> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Mat::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            basis[(pc, k)] = -r[(row, f)].clone();
        }
    }
    basis
}

/// Some solution `x` of `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Mat<Rat>, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(m.rows(), b.len());
    let aug = m.hcat(&Mat::from_columns(m.rows(), &[b.to_vec()]));
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, m.cols())].clone();
    }
    Some(x)
}

/// Columns of `m` forming a basis of its column space.
pub fn column_basis(m: &Mat<Rat>) -> Mat<Rat> {
    let (_, pivots) = rref(m);
    m.select(&(0..m.rows()).collect::<Vec<_>>(), &pivots)
}

pub fn inverse(m: &Mat<Rat>) -> Option<Mat<Rat>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let aug = m.hcat(&Mat::identity(n));
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots.iter().take(n).any(|&c| c >= n) {
        return None;
    }
    Some(r.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Mat<Rat> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let n = nullspace(&m);
        assert_eq!(n.cols(), 2);
        assert!(m.mul(&n).is_zero());
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = mat(&[&[1, 1], &[1, -1]]);
        let x = solve(&m, &[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let m = mat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&m, &[q(1), q(3)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn empty_shapes() {
        let m: Mat<Rat> = Mat::zeros(0, 3);
        assert_eq!(nullspace(&m).shape(), (3, 3));
        let m: Mat<Rat> = Mat::zeros(2, 0);
        assert_eq!(rank(&m), 0);
        assert_eq!(solve(&m, &[q(0), q(0)]), Some(vec![]));
    }
}
