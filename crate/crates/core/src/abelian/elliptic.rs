//! Elliptic curves `y^2 = x^3 + a x + b` over `Q`, exact point arithmetic and the
//! canonical height `h^(P) = lim 4^-n h(x(2^n P))` with `h(p/q) = log max(|p|, |q|)`.

use std::fmt;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::matrix;
use crate::numeric;
use rug::ops::Pow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurveQ {
    a: Rational,
    b: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(Rational, Rational),
}

impl Point {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point::Affine(x.into(), y.into())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            Point::Affine(x, _) => Some(x),
            Point::Infinity => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// Rational points of order dividing some `n <= 12` are exactly the torsion points over `Q`.
pub const MAX_TORSION_ORDER: u32 = 12;

impl EllipticCurveQ {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        let c = EllipticCurveQ { a, b };
        if c.discriminant() == 0 {
            return Err(Error::Degenerate(format!("y^2 = x^3 + ({})x + ({}) is singular", c.a, c.b)));
        }
        Ok(c)
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(numeric::parse_rational(a)?, numeric::parse_rational(b)?)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `-16 (4 a^3 + 27 b^2)`
    pub fn discriminant(&self) -> Rational {
        let a3 = Rational::from(&self.a * &self.a) * &self.a;
        let b2 = Rational::from(&self.b * &self.b);
        (a3 * 4u32 + b2 * 27u32) * -16i32
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => Rational::from(y * y) == self.rhs(x),
        }
    }

    fn rhs(&self, x: &Rational) -> Rational {
        Rational::from(x * x) * x + Rational::from(&self.a * x) + &self.b
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), Rational::from(-y)),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if Rational::from(y1 + y2) == 0 {
                return Point::Infinity;
            }
            (Rational::from(x1 * x1) * 3u32 + &self.a) / Rational::from(y1 * 2u32)
        } else {
            Rational::from(y2 - y1) / Rational::from(x2 - x1)
        };
        let x3 = Rational::from(&lambda * &lambda) - x1 - x2;
        let y3 = lambda * Rational::from(x1 - &x3) - y1;
        Point::Affine(x3, y3)
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let (mut acc, mut pw) = (Point::Infinity, base);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pw);
            }
            pw = self.double(&pw);
            k >>= 1;
        }
        acc
    }

    /// Order of a torsion point, `None` for points of infinite order.
    pub fn torsion_order(&self, p: &Point) -> Option<u32> {
        let mut q = p.clone();
        for n in 1..=MAX_TORSION_ORDER {
            if q.is_infinity() {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }

    /// `u > 0` with `u^4 a` and `u^6 b` integral, and the integral coefficients.
    fn integral_model(&self) -> (Integer, Integer, Integer) {
        // the lcm of the denominators makes the model integral; minimality is not needed
        // because the canonical height does not depend on the model
        let u = Integer::from(self.a.denom().lcm_ref(self.b.denom()));
        let u2 = Integer::from(&u * &u);
        let u4 = Integer::from(&u2 * &u2);
        let u6 = Integer::from(&u4 * &u2);
        let a = Rational::from(&self.a * &u4).into_numer_denom().0;
        let b = Rational::from(&self.b * &u6).into_numer_denom().0;
        (u, a, b)
    }
}

fn log_max(prec: u32, p: &Integer, q: &Integer) -> Float {
    let m = if p.cmp_abs(q) == std::cmp::Ordering::Greater { p.clone().abs() } else { q.clone().abs() };
    numeric::ln_integer(prec, &m)
}

/// `h(p/q) = log max(|p|, |q|)` for `x` in lowest terms.
pub fn naive_height(prec: u32, x: &Rational) -> Float {
    log_max(prec, x.numer(), x.denom())
}

#[derive(Clone, Debug)]
pub struct CanonicalHeight {
    pub value: Float,
    pub torsion_order: Option<u32>,
    /// Number of doubling steps summed.
    pub terms: usize,
    /// `4^-n (log R + log C) / 3`, with `C` the coefficient bound of the doubling forms.
    pub tail_estimate: Float,
    pub working_precision_bits: u32,
}

/// Doubling forms `F, G` on the integral model with `x(2P) = F(A, B) / G(A, B)` for `x(P) = A / B`.
struct Doubling {
    a: Integer,
    b: Integer,
}

impl Doubling {
    fn f<T>(&self, x: &T, z: &T) -> (T, T)
    where
        T: Clone + Ring,
    {
        let x2 = x.mul(x);
        let z2 = z.mul(z);
        let xz = x.mul(z);
        // F = x^4 - 2a x^2 z^2 - 8b x z^3 + a^2 z^4
        let f = x2.mul(&x2)
            .sub(&x2.mul(&z2).scale(&Integer::from(&self.a * 2u32)))
            .sub(&xz.mul(&z2).scale(&Integer::from(&self.b * 8u32)))
            .add(&z2.mul(&z2).scale(&Integer::from(&self.a * &self.a)));
        // G = 4 z (x^3 + a x z^2 + b z^3)
        let g = x2.mul(&xz)
            .add(&xz.mul(&z2).scale(&self.a))
            .add(&z2.mul(&z2).scale(&self.b))
            .scale(&Integer::from(4));
        (f, g)
    }

    /// `|Res(F(x, 1), G(x, 1))|`; for coprime `A, B` the gcd of `F(A, B)` and `G(A, B)` divides it.
    fn resultant(&self) -> Integer {
        let f = [Integer::from(1), Integer::new(), Integer::from(&self.a * -2i32), Integer::from(&self.b * -8i32), Integer::from(&self.a * &self.a)];
        let g = [Integer::from(4), Integer::new(), Integer::from(&self.a * 4u32), Integer::from(&self.b * 4u32)];
        let n = 7;
        let mut s = matrix::zeros(n, n);
        for r in 0..3 {
            for (k, c) in f.iter().enumerate() {
                s[r][r + k] = c.clone();
            }
        }
        for r in 0..4 {
            for (k, c) in g.iter().enumerate() {
                s[3 + r][r + k] = c.clone();
            }
        }
        matrix::det(&s).abs()
    }

    fn coefficient_bound(&self) -> Integer {
        let a = Integer::from(self.a.abs_ref());
        let b = Integer::from(self.b.abs_ref());
        let f = Integer::from(1) + Integer::from(&a * 2u32) + Integer::from(&b * 8u32) + Integer::from(&a * &a);
        let g = (Integer::from(1) + &a + &b) * 4u32;
        f.max(g)
    }
}

trait Ring: Sized {
    fn mul(&self, o: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn scale(&self, c: &Integer) -> Self;
}

impl Ring for Integer {
    fn mul(&self, o: &Self) -> Self {
        Integer::from(self * o)
    }
    fn add(&self, o: &Self) -> Self {
        Integer::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Integer::from(self - o)
    }
    fn scale(&self, c: &Integer) -> Self {
        Integer::from(self * c)
    }
}

impl Ring for Float {
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn scale(&self, c: &Integer) -> Self {
        Float::with_val(self.prec(), self * c)
    }
}

/// `h^(P)` as the telescoped series
/// `h(x_0) + sum_k 4^-(k+1) (log max(|F|, |G|)(A_k, B_k) - 4 log max(|A_k|, |B_k|) - log g_k)`
/// where `g_k = gcd(F, G)` at step `k`. The archimedean part follows the real projective point
/// `(A_k : B_k)`; `g_k` divides the resultant `R`, so it is read off `(A_k, B_k)` modulo a power
/// of `R` that loses one factor per step.
pub fn canonical_height(e: &EllipticCurveQ, p: &Point, precision_bits: u32) -> Result<CanonicalHeight> {
    if precision_bits < 8 {
        return invalid("precision must be at least 8 bits");
    }
    if !e.contains(p) {
        return invalid(format!("{p} is not on the curve"));
    }
    let zero = |wp| CanonicalHeight {
        value: Float::new(wp),
        torsion_order: None,
        terms: 0,
        tail_estimate: Float::new(53),
        working_precision_bits: wp,
    };
    if let Some(n) = e.torsion_order(p) {
        return Ok(CanonicalHeight { torsion_order: Some(n), ..zero(precision_bits) });
    }
    let Point::Affine(x, _) = p else { unreachable!("torsion") };
    let (u, a, b) = e.integral_model();
    let x0 = Rational::from(x * Integer::from(&u * &u));
    let dbl = Doubling { a, b };
    let r = dbl.resultant();
    let cbound = dbl.coefficient_bound();

    // enough terms that 4^-n (log R + log C) is below 2^-(prec + 8)
    let logs = numeric::ln_integer(64, &r).to_f64() + numeric::ln_integer(64, &cbound).to_f64() + 1.0;
    let n = ((precision_bits as f64 + 8.0 + logs.log2().max(0.0)) / 2.0).ceil() as usize;
    let wp = 2 * precision_bits + 4 * n as u32 + 64;

    let modulus = r.clone().pow(n as u32 + 1);
    let (mut am, mut bm) = (x0.numer().clone() % &modulus, x0.denom().clone() % &modulus);
    let mut modulus = modulus;
    let (ax, bx) = (numeric::from_integer(wp, x0.numer()), numeric::from_integer(wp, x0.denom()));
    let norm = |p: Float, q: Float| -> (Float, Float) {
        let m = Float::with_val(wp, p.clone().abs()).max(&Float::with_val(wp, q.clone().abs()));
        (p / &m, q / m)
    };
    let (mut alpha, mut beta) = norm(ax, bx);
    let mut value = naive_height(wp, &x0);
    let mut weight = Float::with_val(wp, 0.25);
    for _ in 0..n {
        let (fr, gr) = dbl.f(&alpha, &beta);
        let arch = Float::with_val(wp, fr.clone().abs()).max(&Float::with_val(wp, gr.clone().abs())).ln();
        let (fm, gm) = dbl.f(&am, &bm);
        let g = Integer::from(fm.gcd_ref(&gm)).gcd(&r);
        let local = numeric::ln_integer(wp, &g);
        value += Float::with_val(wp, &weight * Float::with_val(wp, &arch - &local));
        weight /= 4u32;
        (alpha, beta) = norm(fr, gr);
        modulus = modulus.div_exact(&r);
        am = fm.div_exact(&g) % &modulus;
        bm = gm.div_exact(&g) % &modulus;
    }
    let tail_estimate = Float::with_val(53, &weight * 4u32) * logs / 3u32;
    Ok(CanonicalHeight {
        value: Float::with_val(precision_bits, value),
        torsion_order: None,
        terms: n,
        tail_estimate,
        working_precision_bits: wp,
    })
}

#[derive(Serialize, Deserialize)]
pub struct CurveJson {
    pub a: String,
    pub b: String,
}

impl CurveJson {
    pub fn into_curve(self) -> Result<EllipticCurveQ> {
        EllipticCurveQ::parse(&self.a, &self.b)
    }

    pub fn from_curve(e: &EllipticCurveQ) -> Self {
        CurveJson { a: e.a.to_string(), b: e.b.to_string() }
    }
}

/// `"x,y"` with rational coordinates, or `"O"` for the point at infinity.
pub fn parse_point(s: &str) -> Result<Point> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.eq_ignore_ascii_case("o") || s.eq_ignore_ascii_case("infinity") {
        return Ok(Point::Infinity);
    }
    let Some((x, y)) = s.split_once(',') else {
        return invalid(format!("point {s:?} should look like x,y"));
    };
    Ok(Point::Affine(numeric::parse_rational(x.trim())?, numeric::parse_rational(y.trim())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (EllipticCurveQ, Point) {
        (EllipticCurveQ::new(0, -2).unwrap(), Point::new(3, 5))
    }

    #[test]
    fn group_law() {
        let (e, p) = sample();
        let p2 = e.double(&p);
        assert!(e.contains(&p2));
        assert_eq!(p2, Point::new(Rational::from((129, 100)), Rational::from((-383, 1000))));
        let p3 = e.add(&p2, &p);
        assert_eq!(e.mul(3, &p), p3);
        assert_eq!(e.add(&p3, &e.neg(&p3)), Point::Infinity);
        assert_eq!(e.mul(-2, &p), e.neg(&p2));
    }

    #[test]
    fn torsion_orders() {
        let e = EllipticCurveQ::new(0, 1).unwrap();
        assert_eq!(e.torsion_order(&Point::new(-1, 0)), Some(2));
        assert_eq!(e.torsion_order(&Point::new(0, 1)), Some(3));
        assert_eq!(e.torsion_order(&Point::new(2, 3)), Some(6));
        let (e, p) = sample();
        assert_eq!(e.torsion_order(&p), None);
        assert!(EllipticCurveQ::new(0, 0).is_err());
    }

    #[test]
    fn torsion_height_zero() {
        let e = EllipticCurveQ::new(0, 1).unwrap();
        for p in [Point::new(-1, 0), Point::new(0, 1), Point::new(2, 3)] {
            assert_eq!(canonical_height(&e, &p, 128).unwrap().value, 0);
        }
        let e = EllipticCurveQ::new(-1, 0).unwrap();
        assert_eq!(canonical_height(&e, &Point::new(1, 0), 128).unwrap().torsion_order, Some(2));
    }

    #[test]
    fn agrees_with_naive_limit() {
        // oracle: 4^-n h(x(2^n P)) with exact doubling, error O(4^-n)
        let (e, p) = sample();
        let h = canonical_height(&e, &p, 128).unwrap().value.to_f64();
        let mut q = p.clone();
        let mut prev = f64::INFINITY;
        for n in 0..9 {
            let naive = naive_height(128, q.x().unwrap()).to_f64() / 4f64.powi(n);
            let err = (naive - h).abs();
            if n >= 3 {
                assert!(err < 20.0 / 4f64.powi(n), "n = {n}: {err}");
                assert!(err < prev);
            }
            prev = err;
            q = e.double(&q);
        }
    }

    #[test]
    fn precision_self_consistency() {
        let (e, p) = sample();
        let h1 = canonical_height(&e, &p, 128).unwrap();
        let h2 = canonical_height(&e, &p, 256).unwrap();
        let d = Float::with_val(256, &h1.value - &h2.value).abs().to_f64();
        assert!(d < 1e-30, "{d}");
        assert!(h1.value > 0);
    }

    #[test]
    fn quadratic_and_parallelogram() {
        let (e, p) = sample();
        let h = |q: &Point| canonical_height(&e, q, 128).unwrap().value.to_f64();
        let hp = h(&p);
        assert!((h(&e.double(&p)) - 4.0 * hp).abs() < 1e-12);
        assert!((h(&e.mul(3, &p)) - 9.0 * hp).abs() < 1e-12);
        let (q1, q2) = (e.mul(2, &p), e.mul(-3, &p));
        let lhs = h(&e.add(&q1, &q2)) + h(&e.add(&q1, &e.neg(&q2)));
        assert!((lhs - 2.0 * h(&q1) - 2.0 * h(&q2)).abs() < 1e-12, "{lhs} {} {}", h(&q1), h(&q2));
    }

    #[test]
    fn rational_coefficients_and_scaling_invariance() {
        // y^2 = x^3 - 2/64 is y^2 = x^3 - 2 scaled by u = 2, with (3, 5) -> (3/4, 5/8)
        let e = EllipticCurveQ::new(0, Rational::from((-2, 64))).unwrap();
        let p = Point::new(Rational::from((3, 4)), Rational::from((5, 8)));
        let (e0, p0) = sample();
        let a = canonical_height(&e, &p, 128).unwrap().value;
        let b = canonical_height(&e0, &p0, 128).unwrap().value;
        assert!(Float::with_val(128, &a - &b).abs().to_f64() < 1e-30);
    }

    #[test]
    fn off_curve_rejected() {
        let (e, _) = sample();
        assert!(canonical_height(&e, &Point::new(1, 1), 64).is_err());
        assert_eq!(parse_point("(3, 5)").unwrap(), Point::new(3, 5));
    }
}
