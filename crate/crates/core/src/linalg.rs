//! Exact linear algebra over a [`Field`] by Gaussian elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::{Field, Scalar};

/// Reduced row echelon form. Returns the reduced rows and the pivot columns.
pub fn rref<T: Field>(rows: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (m, pivots)
}

pub fn rank<T: Field>(rows: &[Vec<T>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : rows . x = 0}`, one vector per free column.
pub fn nullspace<T: Field>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
    }
    let (m, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![T::zero(); ncols];
        v[free] = T::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some `x` with `sum_i x_i * columns[i] = rhs`, free variables set to zero.
pub fn solve_columns<T: Field>(columns: &[Vec<T>], rhs: &[T]) -> Option<Vec<T>> {
    let n = columns.len();
    let aug: Vec<Vec<T>> = (0..rhs.len())
        .map(|r| {
            let mut row: Vec<T> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![T::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][n].clone();
    }
    Some(x)
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn cross3<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `v . m`, treating `v` as a row vector.
pub fn vec_mat<T: Scalar>(v: &[T], m: &[Vec<T>]) -> Vec<T> {
    let ncols = m.first().map_or(0, Vec::len);
    (0..ncols)
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(T::zero(), |acc, (x, row)| acc + x.clone() * row[j].clone())
        })
        .collect()
}
