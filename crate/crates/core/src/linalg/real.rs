//! Small dense linear algebra over MPFR floats.

use rug::Float;

pub type RealMatrix = Vec<Vec<Float>>;

pub fn zeros(prec: u32, rows: usize, cols: usize) -> RealMatrix {
    vec![vec![Float::new(prec); cols]; rows]
}

pub fn identity(prec: u32, n: usize) -> RealMatrix {
    let mut m = zeros(prec, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Float::with_val(prec, 1);
    }
    m
}

pub fn from_f64(prec: u32, rows: &[Vec<f64>]) -> RealMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Float::with_val(prec, x)).collect())
        .collect()
}

pub fn to_f64(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect()
}

pub fn prec_of(m: &RealMatrix) -> u32 {
    m.iter().flatten().map(|x| x.prec()).max().unwrap_or(64)
}

pub fn mul(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let p = prec_of(a).max(prec_of(b));
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = zeros(p, n, m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = Float::new(p);
            for l in 0..k {
                acc += Float::with_val(p, &a[i][l] * &b[l][j]);
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mul_vec(a: &RealMatrix, v: &[Float]) -> Vec<Float> {
    let p = prec_of(a);
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Float::new(p), |acc, (x, y)| acc + Float::with_val(p, x * y))
        })
        .collect()
}

pub fn transpose(a: &RealMatrix) -> RealMatrix {
    let c = a.first().map_or(0, |r| r.len());
    (0..c).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Cholesky factor `L` with `a = L L^T`; `None` unless `a` is positive definite.
pub fn cholesky(a: &RealMatrix) -> Option<RealMatrix> {
    let n = a.len();
    let p = prec_of(a);
    let mut l = zeros(p, n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j].clone();
            for k in 0..j {
                s -= Float::with_val(p, &l[i][k] * &l[j][k]);
            }
            if i == j {
                if s <= 0 || s.is_nan() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / &l[j][j];
            }
        }
    }
    Some(l)
}

/// Determinant by partial-pivot Gaussian elimination.
pub fn det(a: &RealMatrix) -> Float {
    let n = a.len();
    let p = prec_of(a);
    let mut m = a.clone();
    let mut d = Float::with_val(p, 1);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].cmp_abs(&m[j][k]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        if m[piv][k].is_zero() {
            return Float::new(p);
        }
        if piv != k {
            m.swap(piv, k);
            d = -d;
        }
        d *= &m[k][k];
        for i in k + 1..n {
            let f = Float::with_val(p, &m[i][k] / &m[k][k]);
            for j in k..n {
                let t = Float::with_val(p, &f * &m[k][j]);
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Solves `a x = b` for square `a`; `None` if singular.
pub fn solve(a: &RealMatrix, b: &[Float]) -> Option<Vec<Float>> {
    let n = a.len();
    let p = prec_of(a).max(b.iter().map(|x| x.prec()).max().unwrap_or(64));
    let mut m: RealMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<Float> = row.iter().map(|x| Float::with_val(p, x)).collect();
            r.push(Float::with_val(p, rhs));
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].cmp_abs(&m[j][k]).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        if m[piv][k].is_zero() {
            return None;
        }
        m.swap(piv, k);
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = Float::with_val(p, &m[i][k] / &m[k][k]);
            if f.is_zero() {
                continue;
            }
            for j in k..=n {
                let t = Float::with_val(p, &f * &m[k][j]);
                m[i][j] -= t;
            }
        }
    }
    Some((0..n).map(|i| Float::with_val(p, &m[i][n] / &m[i][i])).collect())
}

/// Least-squares solution of the overdetermined system `x A = y`
/// (rows of `A` are the spanning vectors) together with the residual norm.
pub fn project_onto_rows(rows: &RealMatrix, y: &[Float]) -> Option<(Vec<Float>, Float)> {
    let p = prec_of(rows);
    let at = transpose(rows);
    let gram = mul(rows, &at);
    let rhs = mul_vec(rows, y);
    let coeffs = solve(&gram, &rhs)?;
    let fitted = mul_vec(&at, &coeffs);
    let res = fitted
        .iter()
        .zip(y)
        .fold(Float::new(p), |acc, (f, t)| acc + Float::with_val(p, f - t).square())
        .sqrt();
    Some((coeffs, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = from_f64(128, &[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(cholesky(&a).is_none());
        let b = from_f64(128, &[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = cholesky(&b).unwrap();
        let back = mul(&l, &transpose(&l));
        assert!((back[1][1].to_f64() - 3.0).abs() < 1e-30);
    }

    #[test]
    fn det_and_solve() {
        let a = from_f64(128, &[vec![0.0, 2.0], vec![3.0, 1.0]]);
        assert_eq!(det(&a).to_f64(), -6.0);
        let x = solve(&a, &[Float::with_val(128, 4), Float::with_val(128, 5)]).unwrap();
        assert_eq!(x[0].to_f64(), 1.0);
        assert_eq!(x[1].to_f64(), 2.0);
    }
}
