//! The k-height `H_k(y)`: least `max |a_i|` over nonzero integer polynomials of degree
//! at most `k` vanishing at `y`.

use std::fmt;

use rug::{Integer, Rational};
use serde::{Serialize, Serializer};

use crate::algebraic::AlgebraicNumber;
use crate::error::{invalid, Result};
use crate::linalg::minima::enumerate;
use crate::poly::{self, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KHeightValue {
    pub k: usize,
    /// `None` when the degree exceeds `k`.
    pub value: Option<Integer>,
}

impl KHeightValue {
    pub fn is_finite(&self) -> bool {
        self.value.is_some()
    }

    pub fn at_most(&self, t: &Integer) -> bool {
        self.value.as_ref().is_some_and(|v| v <= t)
    }
}

impl fmt::Display for KHeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "infinity"),
        }
    }
}

impl Serialize for KHeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J {
            k: usize,
            value: String,
        }
        J { k: self.k, value: self.to_string() }.serialize(s)
    }
}

fn sup_norm(p: &[Integer]) -> Integer {
    p.iter().map(|c| Integer::from(c.abs_ref())).max().unwrap_or_default()
}

/// `H_k` of any root of the irreducible polynomial `m`.
///
/// Every vanishing polynomial of degree `<= k` is `m Q` with `Q` integral (Gauss), so the
/// minimum runs over the lattice spanned by `x^j m`, `j <= k - deg m`. All lattice vectors
/// with Euclidean norm at most `sqrt(k + 1)` times the best sup norm so far are enumerated.
pub fn k_height_of_min_poly(m: &[Integer], k: usize) -> Result<KHeightValue> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let m = poly::primitive(m);
    let d = poly::degree(&m);
    if d < 1 {
        return invalid("minimal polynomial must have positive degree");
    }
    let d = d as usize;
    if d > k {
        return Ok(KHeightValue { k, value: None });
    }
    let mut best = sup_norm(&m);
    let r = k - d + 1;
    if r > 1 {
        let rows: Vec<Poly> = (0..r)
            .map(|j| {
                let mut v = poly::shift(&m, j);
                v.resize(k + 1, Integer::new());
                v
            })
            .collect();
        let g: Vec<Vec<f64>> = rows
            .iter()
            .map(|a| rows.iter().map(|b| crate::linalg::matrix::dot(a, b).to_f64()).collect())
            .collect();
        let radius2 = (k + 1) as f64 * best.to_f64().powi(2) * (1.0 + 1e-9) + 1e-6;
        for q in enumerate(&g, radius2)? {
            let mut v = vec![Integer::new(); k + 1];
            for (qi, row) in q.iter().zip(&rows) {
                crate::linalg::matrix::axpy(&mut v, qi, row);
            }
            let s = sup_norm(&v);
            if s > 0 && s < best {
                best = s;
            }
        }
    }
    Ok(KHeightValue { k, value: Some(best) })
}

pub fn k_height(a: &AlgebraicNumber, k: usize) -> Result<KHeightValue> {
    k_height_of_min_poly(a.min_poly(), k)
}

/// `H_k(p/q) = max(|p|, q)` for every `k >= 1`.
pub fn k_height_rational(q: &Rational, k: usize) -> Result<KHeightValue> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let v = Integer::from(q.numer().abs_ref()).max(q.denom().clone());
    Ok(KHeightValue { k, value: Some(v) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::from_i64;

    #[test]
    fn spec_examples() {
        assert_eq!(k_height_rational(&Rational::from((3, 5)), 1).unwrap().value, Some(Integer::from(5)));
        let sqrt2 = from_i64(&[-2, 0, 1]);
        assert_eq!(k_height_of_min_poly(&sqrt2, 1).unwrap().value, None);
        assert_eq!(k_height_of_min_poly(&sqrt2, 2).unwrap().value, Some(Integer::from(2)));
        assert_eq!(k_height_of_min_poly(&sqrt2, 3).unwrap().value, Some(Integer::from(2)));
    }

    #[test]
    fn multiples_can_lower_the_height() {
        assert_eq!(k_height_of_min_poly(&from_i64(&[-1, -1, 1]), 3).unwrap().value, Some(Integer::from(1)));
        // 5x^2 + 8x + 5 has height 8, but (x - 1)(5x^2 + 8x + 5) = 5x^3 + 3x^2 - 3x - 5
        let m = from_i64(&[5, 8, 5]);
        let h3 = k_height_of_min_poly(&m, 3).unwrap().value.unwrap();
        let brute = (-9i64..=9)
            .flat_map(|a| (-9i64..=9).map(move |b| (a, b)))
            .filter(|&(a, b)| (a, b) != (0, 0))
            .map(|(a, b)| poly::mul(&m, &from_i64(&[b, a])).iter().map(|c| c.to_i64().unwrap().abs()).max().unwrap())
            .min()
            .unwrap();
        assert_eq!(h3, brute);
        assert_eq!(h3, 5);
        assert_eq!(k_height_of_min_poly(&m, 2).unwrap().value, Some(Integer::from(8)));
    }

    #[test]
    fn agrees_with_rational_formula() {
        for (p, q) in [(0, 1), (7, 3), (-9, 4), (1, 10)] {
            let r = Rational::from((p, q));
            let m = vec![Integer::from(-r.numer()), r.denom().clone()];
            for k in 1..=3 {
                assert_eq!(k_height_of_min_poly(&m, k).unwrap(), k_height_rational(&r, k).unwrap());
            }
        }
    }
}
