//! Row Hermite and Smith normal forms.

use rug::Integer;

use super::matrix::{cols, identity, IntMatrix};
use crate::numeric::IntExt;

fn ext_gcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    a.ext_gcd(b)
}

/// Replaces rows `(r, i)` by `(s*r + t*i, -v*r + u*i)`, a unimodular step.
fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, s: &Integer, t: &Integer, u: &Integer, v: &Integer) {
    let width = m[r].len();
    for c in 0..width {
        let a = m[r][c].clone();
        let b = m[i][c].clone();
        m[r][c] = Integer::from(s * &a) + Integer::from(t * &b);
        m[i][c] = Integer::from(u * &b) - Integer::from(v * &a);
    }
}

fn sub_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, q: &Integer) {
    if q.is_zero() {
        return;
    }
    let width = m[dst].len();
    for c in 0..width {
        let d = Integer::from(q * &m[src][c]);
        m[dst][c] -= d;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for x in m[r].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Row Hermite normal form.
///
/// Returns `(h, u)` with `u * matrix = h`, `u` unimodular, `h` in row echelon
/// form with positive pivots, entries above each pivot reduced into
/// `[0, pivot)`, and zero rows at the bottom.
pub fn hnf(matrix: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = matrix.len();
    let n = cols(matrix);
    let mut h = matrix.clone();
    let mut u = identity(m);
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h[i][col].is_zero() {
                continue;
            }
            let (g, s, t) = ext_gcd(&h[r][col], &h[i][col]);
            let uu = Integer::from(h[r][col].div_exact_ref(&g));
            let vv = Integer::from(h[i][col].div_exact_ref(&g));
            combine_rows(&mut h, r, i, &s, &t, &uu, &vv);
            combine_rows(&mut u, r, i, &s, &t, &uu, &vv);
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col] < 0 {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][col].div_floor_by(&h[r][col]);
            sub_row_multiple(&mut h, i, r, &q);
            sub_row_multiple(&mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form.
///
/// Returns `(diag, left, right)` with `left * matrix * right` diagonal,
/// `diag[i] | diag[i+1]`, all entries nonnegative, and `left`, `right`
/// unimodular. `diag` has `min(rows, cols)` entries.
pub fn snf(matrix: &IntMatrix) -> (Vec<Integer>, IntMatrix, IntMatrix) {
    let m = matrix.len();
    let n = cols(matrix);
    let mut d = matrix.clone();
    let mut left = identity(m);
    let mut right = identity(n);

    let swap_cols = |a: &mut IntMatrix, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };
    let sub_col_multiple = |a: &mut IntMatrix, dst: usize, src: usize, q: &Integer| {
        for row in a.iter_mut() {
            let v = Integer::from(q * &row[src]);
            row[dst] -= v;
        }
    };

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => d[i][j].cmp_abs(&d[bi][bj]).is_lt(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut right, t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                let q = d[i][t].div_trunc_by(&d[t][t]);
                sub_row_multiple(&mut d, i, t, &q);
                sub_row_multiple(&mut left, i, t, &q);
                dirty |= !d[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = d[t][j].div_trunc_by(&d[t][t]);
                sub_col_multiple(&mut d, j, t, &q);
                sub_col_multiple(&mut right, j, t, &q);
                dirty |= !d[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[i][j].is_divisible(&d[t][t]))
            });
            match offender {
                Some(i) => {
                    // pull the offending row up; the next pass shrinks the pivot
                    let one = Integer::from(-1);
                    sub_row_multiple(&mut d, t, i, &one);
                    sub_row_multiple(&mut left, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut left, t);
        }
    }
    let diag = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    (diag, left, right)
}

#[cfg(test)]
mod tests {
    use super::super::matrix::{det, from_i64, mul, zeros};
    use super::*;
    use proptest::prelude::*;

    fn assert_unimodular(u: &IntMatrix) {
        let d = det(u);
        assert!(d == 1 || d == -1, "det = {d}");
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for (r, row) in h.iter().enumerate() {
            match row.iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || row[p] <= 0 {
                        return false;
                    }
                    for above in &h[..r] {
                        if above[p] < 0 || above[p] >= row[p] {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity() {
        let id = identity(3);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_small_example() {
        let a = from_i64(&[vec![2, 4], vec![6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, from_i64(&[vec![2, 0], vec![0, 4]]));
        assert_unimodular(&u);
        assert_eq!(mul(&u, &a), h);
    }

    #[test]
    fn hnf_zero() {
        let z = zeros(2, 3);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, identity(2));
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = snf(&identity(3));
        assert!(d.iter().all(|x| *x == 1));
        let a = from_i64(&[vec![2, 0], vec![0, 3]]);
        let (d, l, r) = snf(&a);
        assert_eq!(d, vec![Integer::from(1), Integer::from(6)]);
        assert_unimodular(&l);
        assert_unimodular(&r);
        let (d, _, _) = snf(&from_i64(&[vec![0]]));
        assert_eq!(d, vec![Integer::new()]);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-12i64..12, c), r)
        })
    }

    proptest! {
        #[test]
        fn hnf_is_canonical_and_idempotent(rows in small_matrix()) {
            let a = from_i64(&rows);
            let (h, u) = hnf(&a);
            prop_assert!(is_hnf(&h));
            prop_assert_eq!(mul(&u, &a), h.clone());
            let d = det(&u);
            prop_assert!(d == 1 || d == -1);
            let (h2, _) = hnf(&h);
            prop_assert_eq!(h2, h);
        }

        #[test]
        fn snf_diagonalizes_with_divisibility(rows in small_matrix()) {
            let a = from_i64(&rows);
            let (diag, l, r) = snf(&a);
            let prod = mul(&mul(&l, &a), &r);
            for (i, row) in prod.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if i == j {
                        prop_assert_eq!(x, &diag[i]);
                    } else {
                        prop_assert!(x.is_zero());
                    }
                }
            }
            for w in diag.windows(2) {
                if w[0].is_zero() {
                    prop_assert!(w[1].is_zero());
                } else {
                    prop_assert!(w[1].is_divisible(&w[0]));
                }
            }
            let dl = det(&l);
            let dr = det(&r);
            prop_assert!(dl == 1 || dl == -1);
            prop_assert!(dr == 1 || dr == -1);
        }
    }
}
