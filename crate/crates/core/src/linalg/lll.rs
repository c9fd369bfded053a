//! LLL reduction with respect to an arbitrary positive-definite form.

use rug::{Float, Integer};

use super::lattice::{GramForm, IntegerLattice};
use super::matrix::{self, IntMatrix};
use crate::error::{invalid, Error, Result};
use crate::numeric::IntExt;

pub const DEFAULT_DELTA: f64 = 0.99;

/// A reduced basis together with the (HNF-canonical) lattice it generates.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedBasis {
    pub basis: IntMatrix,
    pub lattice: IntegerLattice,
    pub delta: f64,
}

impl ReducedBasis {
    pub fn norms(&self, form: &GramForm) -> Vec<Float> {
        self.basis.iter().map(|b| form.norm(b)).collect()
    }
}

pub fn lll_reduce(lat: &IntegerLattice, form: &GramForm, delta: f64) -> Result<ReducedBasis> {
    if form.dim() != lat.ambient_dim() {
        return invalid(format!(
            "form dimension {} differs from lattice ambient dimension {}",
            form.dim(),
            lat.ambient_dim()
        ));
    }
    let basis = lll_basis(lat.basis(), form, delta)?;
    debug_assert_eq!(
        IntegerLattice::new(lat.ambient_dim(), basis.clone()).unwrap(),
        *lat,
        "LLL changed the lattice"
    );
    Ok(ReducedBasis { basis, lattice: lat.clone(), delta })
}

struct Gso {
    mu: Vec<Vec<Float>>,
    b2: Vec<Float>,
}

fn gso(gram: &[Vec<Float>], prec: u32) -> Result<Gso> {
    let n = gram.len();
    let mut mu = vec![vec![Float::new(prec); n]; n];
    let mut b2 = vec![Float::new(prec); n];
    // r_ij = <b_i, b*_j> computed from the Gram matrix
    let mut r = vec![vec![Float::new(prec); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut v = gram[i][j].clone();
            for k in 0..j {
                v -= Float::with_val(prec, &mu[j][k] * &r[i][k]);
            }
            r[i][j] = v;
            if j < i {
                mu[i][j] = Float::with_val(prec, &r[i][j] / &b2[j]);
            }
        }
        b2[i] = r[i][i].clone();
        if b2[i] <= 0 {
            return Err(Error::Degenerate(
                "form is not positive definite on the basis (zero Gram–Schmidt length)".into(),
            ));
        }
    }
    Ok(Gso { mu, b2 })
}

/// LLL on independent integer rows; returns the reduced rows.
pub fn lll_basis(rows: &IntMatrix, form: &GramForm, delta: f64) -> Result<IntMatrix> {
    if !(delta > 0.25 && delta < 1.0) {
        return invalid(format!("LLL parameter delta = {delta} must lie in (0.25, 1)"));
    }
    let n = rows.len();
    let mut b = rows.clone();
    if n <= 1 {
        return Ok(b);
    }
    let prec = form.prec().max(128) + 64;
    let mut gram = form.gram_of(&b);
    let mut g = gso(&gram, prec)?;
    let delta = Float::with_val(prec, delta);
    let mut k = 1;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::Precision("LLL did not terminate; increase precision".into()));
        }
        // size reduction of b_k
        for j in (0..k).rev() {
            let q = g.mu[k][j].clone().round();
            if q.is_zero() {
                continue;
            }
            let qi = q.to_integer().unwrap_or_default();
            let src = b[j].clone();
            matrix::axpy(&mut b[k], &Integer::from(-&qi), &src);
            for l in 0..=j {
                let t = if l == j {
                    Float::with_val(prec, &q)
                } else {
                    Float::with_val(prec, &q * &g.mu[j][l])
                };
                g.mu[k][l] -= t;
            }
        }
        let lhs = Float::with_val(prec, &delta - g.mu[k][k - 1].clone().square()) * &g.b2[k - 1];
        if g.b2[k] >= lhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            gram = form.gram_of(&b);
            g = gso(&gram, prec)?;
            k = (k - 1).max(1);
        }
    }
    // deterministic orientation: first nonzero entry positive
    for row in b.iter_mut() {
        if row.iter().find(|x| !x.is_zero()).is_some_and(|x| *x < 0) {
            for x in row.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
    Ok(b)
}

/// Lovász and size conditions, for testing.
pub fn is_lll_reduced(rows: &IntMatrix, form: &GramForm, delta: f64) -> bool {
    let prec = form.prec().max(128) + 64;
    let Ok(g) = gso(&form.gram_of(rows), prec) else {
        return false;
    };
    let eps = 1e-20;
    for i in 1..rows.len() {
        for j in 0..i {
            if g.mu[i][j].to_f64().abs() > 0.5 + eps {
                return false;
            }
        }
        let lhs = (delta - g.mu[i][i - 1].to_f64().powi(2)) * g.b2[i - 1].to_f64();
        if g.b2[i].to_f64() < lhs * (1.0 - eps) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn skewed_basis_finds_unit_vector() {
        let lat = IntegerLattice::from_i64(2, &[vec![1, 0], vec![10000, 1]]).unwrap();
        let form = GramForm::identity(2);
        let red = lll_reduce(&lat, &form, DEFAULT_DELTA).unwrap();
        let min = red.norms(&form).into_iter().map(|x| x.to_f64()).fold(f64::MAX, f64::min);
        // exhaustive search in a small box for the shortest nonzero vector
        let mut best = f64::MAX;
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                if (x, y) != (0, 0) {
                    let v = [(x + 10000 * y) as f64, y as f64];
                    best = best.min((v[0] * v[0] + v[1] * v[1]).sqrt());
                }
            }
        }
        assert_eq!(min, best);
        assert_eq!(min, 1.0);
    }

    #[test]
    fn orthogonal_basis_unchanged() {
        let lat = IntegerLattice::from_i64(3, &[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]).unwrap();
        let red = lll_reduce(&lat, &GramForm::identity(3), DEFAULT_DELTA).unwrap();
        let mut rows = red.basis.clone();
        rows.sort();
        let mut want = lat.basis().clone();
        want.sort();
        assert_eq!(rows, want);
    }

    #[test]
    fn rejects_bad_delta() {
        let lat = IntegerLattice::full(2);
        assert!(lll_reduce(&lat, &GramForm::identity(2), 0.2).is_err());
        assert!(lll_reduce(&lat, &GramForm::identity(2), 1.0).is_err());
    }

    proptest! {
        #[test]
        fn preserves_lattice_and_is_reduced(
            rows in prop::collection::vec(prop::collection::vec(-50i64..50, 4), 1..5)
        ) {
            let lat = IntegerLattice::from_i64(4, &rows).unwrap();
            let form = GramForm::from_f64(&[
                vec![2.0, 0.3, 0.0, 0.1],
                vec![0.3, 1.0, 0.2, 0.0],
                vec![0.0, 0.2, 1.5, 0.4],
                vec![0.1, 0.0, 0.4, 3.0],
            ]).unwrap();
            let red = lll_reduce(&lat, &form, DEFAULT_DELTA).unwrap();
            prop_assert_eq!(IntegerLattice::new(4, red.basis.clone()).unwrap(), lat);
            prop_assert!(is_lll_reduced(&red.basis, &form, DEFAULT_DELTA));
        }
    }
}
