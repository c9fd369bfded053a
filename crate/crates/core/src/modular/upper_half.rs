//! Points of the upper half plane and the action of integer 2x2 matrices.

use std::fmt;

use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{self, Complex};

#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint {
    value: Complex,
}

impl UpperHalfPoint {
    pub fn new(value: Complex) -> Result<Self> {
        if value.im <= 0 || !value.im.is_finite() || !value.re.is_finite() {
            return invalid(format!("{value} is not in the upper half plane"));
        }
        Ok(UpperHalfPoint { value })
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Result<Self> {
        Self::new(Complex::from_f64(prec, re, im))
    }

    pub fn parse(prec: u32, s: &str) -> Result<Self> {
        Self::new(Complex::parse(prec, s)?)
    }

    pub fn value(&self) -> &Complex {
        &self.value
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        UpperHalfPoint { value: self.value.with_prec(prec) }
    }

    pub fn is_in_fundamental_domain(&self) -> bool {
        let half = Float::with_val(self.prec(), 0.5);
        self.value.re.clone().abs() <= half && self.value.norm_sqr() >= 1
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// Integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
    pub d: Integer,
}

impl Mat2 {
    pub fn new(a: impl Into<Integer>, b: impl Into<Integer>, c: impl Into<Integer>, d: impl Into<Integer>) -> Self {
        Mat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// `z -> -1/z`
    pub fn s() -> Self {
        Self::new(0, -1, 1, 0)
    }

    /// `z -> z + n`
    pub fn t(n: impl Into<Integer>) -> Self {
        Self::new(1, n, 0, 1)
    }

    pub fn det(&self) -> Integer {
        Integer::from(&self.a * &self.d) - Integer::from(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = |x: &Integer, y: &Integer, z: &Integer, w: &Integer| Integer::from(x * y) + Integer::from(z * w);
        Mat2 {
            a: e(&self.a, &o.a, &self.b, &o.c),
            b: e(&self.a, &o.b, &self.b, &o.d),
            c: e(&self.c, &o.a, &self.d, &o.c),
            d: e(&self.c, &o.b, &self.d, &o.d),
        }
    }

    pub fn content(&self) -> Integer {
        [&self.b, &self.c, &self.d].iter().fold(self.a.clone().abs(), |g, x| g.gcd(x))
    }

    pub fn entries(&self) -> [&Integer; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `(a z + b) / (c z + d)` at the precision of `z`.
    pub fn act(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let f = |n: &Integer| Complex::from_real(numeric::from_integer(p, n));
        let num = &(&f(&self.a) * z) + &f(&self.b);
        let den = &(&f(&self.c) * z) + &f(&self.d);
        &num / &den
    }

    /// Action on the upper half plane; requires `det > 0`.
    pub fn act_on(&self, z: &UpperHalfPoint) -> Result<UpperHalfPoint> {
        if self.det() <= 0 {
            return invalid("matrix must have positive determinant");
        }
        UpperHalfPoint::new(self.act(z.value()))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let row = |x: &Integer, y: &Integer| {
            vec![crate::linalg::lattice::int_to_json(x), crate::linalg::lattice::int_to_json(y)]
        };
        vec![row(&self.a, &self.b), row(&self.c, &self.d)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(D::Error::custom("expected a 2x2 matrix"));
        }
        let g = |v: &serde_json::Value| crate::linalg::lattice::int_from_json(v).map_err(D::Error::custom);
        Ok(Mat2 { a: g(&rows[0][0])?, b: g(&rows[0][1])?, c: g(&rows[1][0])?, d: g(&rows[1][1])? })
    }
}

const MAX_REDUCTION_STEPS: usize = 100_000;

/// `(z', gamma)` with `z' = gamma z` in the closed fundamental domain and `det gamma = 1`.
///
/// Each step recomputes `gamma z` from the input, so the returned point is the image of
/// the returned matrix at the input precision and the domain inequalities are checked on it.
pub fn reduce_to_fundamental_domain(z: &UpperHalfPoint) -> Result<(UpperHalfPoint, Mat2)> {
    let prec = z.prec();
    let half = Float::with_val(prec, 0.5);
    let mut gamma = Mat2::identity();
    let mut w = z.value().clone();
    for _ in 0..MAX_REDUCTION_STEPS {
        if w.re.clone().abs() > half {
            let n = w.re.clone().round().to_integer().expect("finite");
            gamma = Mat2::t(-n).mul(&gamma);
        } else if w.norm_sqr() < 1 {
            gamma = Mat2::s().mul(&gamma);
        } else {
            return Ok((UpperHalfPoint::new(w)?, gamma));
        }
        w = gamma.act(z.value());
        if w.im <= 0 {
            return Err(Error::Precision(format!(
                "imaginary part underflowed during reduction; raise precision above {prec} bits"
            )));
        }
    }
    Err(Error::Precision(format!(
        "reduction did not terminate in {MAX_REDUCTION_STEPS} steps; raise precision above {prec} bits"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_and_inversion() {
        let z = UpperHalfPoint::from_f64(128, 5.0, 1.0).unwrap();
        let (w, g) = reduce_to_fundamental_domain(&z).unwrap();
        assert_eq!(g, Mat2::t(-5));
        assert_eq!(w.value(), &Complex::i(128));

        let z = UpperHalfPoint::from_f64(128, 0.0, 0.5).unwrap();
        let (w, g) = reduce_to_fundamental_domain(&z).unwrap();
        assert_eq!(g, Mat2::s());
        assert_eq!(w.value(), &Complex::from_f64(128, 0.0, 2.0));

        let z = UpperHalfPoint::from_f64(128, 0.3, 1.2).unwrap();
        let (w, g) = reduce_to_fundamental_domain(&z).unwrap();
        assert_eq!(g, Mat2::identity());
        assert_eq!(w, z);
    }

    #[test]
    fn deep_point_reduces() {
        let z = UpperHalfPoint::from_f64(256, 0.123456, 1e-6).unwrap();
        let (w, g) = reduce_to_fundamental_domain(&z).unwrap();
        assert!(w.is_in_fundamental_domain());
        assert_eq!(g.det(), 1);
        assert_eq!(g.act(z.value()), *w.value());
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = Mat2::new(2, -1, 7, 3);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[2,-1],[7,3]]");
        assert_eq!(serde_json::from_str::<Mat2>(&s).unwrap(), m);
    }
}
