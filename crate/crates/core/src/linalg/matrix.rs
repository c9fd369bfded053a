//! Dense integer matrices as `Vec<Vec<Integer>>` (row-major).

use rug::{Float, Integer};

use crate::numeric::IntExt;

pub type IntMatrix = Vec<Vec<Integer>>;

pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![Integer::new(); cols]; rows]
}

pub fn identity(n: usize) -> IntMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Integer::from(1);
    }
    m
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
        .collect()
}

pub fn to_i64(m: &IntMatrix) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
        .collect()
}

pub fn cols(m: &IntMatrix) -> usize {
    m.first().map_or(0, |r| r.len())
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.len(), cols(m));
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (n, k, m) = (a.len(), b.len(), cols(b));
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += Integer::from(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

/// `m * v` for a column vector `v`.
pub fn mul_vec(m: &IntMatrix, v: &[Integer]) -> Vec<Integer> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Integer::new(), |acc, (a, b)| acc + Integer::from(a * b))
        })
        .collect()
}

pub fn is_zero_vec(v: &[Integer]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter()
        .zip(b)
        .fold(Integer::new(), |acc, (x, y)| acc + Integer::from(x * y))
}

/// `a += s * b`
pub fn axpy(a: &mut [Integer], s: &Integer, b: &[Integer]) {
    if s.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += Integer::from(s * y);
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Integer::new();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn to_float(prec: u32, v: &[Integer]) -> Vec<Float> {
    v.iter().map(|x| Float::with_val(prec, x)).collect()
}

/// Euclidean (Frobenius) norm of an integer matrix.
pub fn frobenius_norm(prec: u32, m: &IntMatrix) -> Float {
    let s = m
        .iter()
        .flatten()
        .fold(Integer::new(), |acc, x| acc + Integer::from(x.square_ref()));
    Float::with_val(prec, &s).sqrt()
}

pub fn max_abs(m: &IntMatrix) -> Integer {
    m.iter()
        .flatten()
        .map(|x| x.clone().abs())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor() {
        let m = from_i64(&[vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]]);
        // cofactor expansion by hand: 2*(-8-2) + 1*(0-5) + 3*(0-20)
        assert_eq!(det(&m), -85);
        let sing = from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(det(&sing), 0);
        let swap = from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(det(&swap), -1);
    }

    #[test]
    fn product_and_transpose() {
        let a = from_i64(&[vec![1, 2], vec![3, 4]]);
        let b = from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(mul(&a, &b), from_i64(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(transpose(&a), from_i64(&[vec![1, 3], vec![2, 4]]));
    }
}
