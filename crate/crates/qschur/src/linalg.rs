//! Exact row reduction over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Reduce `rows` in place to reduced echelon form; returns the pivot columns.
pub fn row_reduce(rows: &mut Matrix) -> Vec<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = BigRational::one() / &rows[rank][col];
        for x in rows[rank].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, pv) in pivot.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    row[c] = &row[c] - &(&f * pv);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Dimension of `{x : M x = 0}` for an `m x width` matrix.
pub fn nullity(rows: &[Vec<BigRational>], width: usize) -> usize {
    width - rank(rows)
}

/// `A * B` for dense matrices.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn flatten(m: &Matrix) -> Vec<BigRational> {
    m.iter().flat_map(|r| r.iter().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    #[test]
    fn rank_and_nullity() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        assert_eq!(nullity(&m, 3), 1);
        assert_eq!(rank(&identity(4)), 4);
    }

    #[test]
    fn multiplication_by_identity() {
        let m = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        assert_eq!(mat_mul(&m, &identity(2)), m);
    }
}
