//! Fraction-free (Bareiss) elimination over the integers.
//!
//! After eliminating with pivots `(r_1, c_1) … (r_k, c_k)`, every remaining
//! entry is a `(k+1)`-minor of the input, so the division by the previous
//! pivot is exact (Sylvester's identity) and intermediate sizes stay
//! bounded by Hadamard's bound instead of growing geometrically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Matrix;
use crate::scalar::Rational;

/// Echelon reduction in place; returns the pivot columns.
pub fn echelon_pivots(rows: &mut [Vec<BigInt>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in (c + 1)..ncols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    echelon_pivots(&mut rows.to_vec()).len()
}

/// Each row scaled by the lcm of its denominators, so the row space (and
/// hence the pivot structure) is unchanged.
pub fn integer_rows(m: &Matrix<Rational>) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

pub fn pivot_columns_rational(m: &Matrix<Rational>) -> Vec<usize> {
    echelon_pivots(&mut integer_rows(m))
}

/// Exact determinant of a square integer matrix.
pub fn determinant_int(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}
