//! Algebraic numbers as (minimal polynomial, isolating disc) pairs, and their heights.

use std::fmt;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::lattice::{int_from_json, int_to_json};
use crate::numeric::{self, Complex, IntExt, DEFAULT_PRECISION};
use crate::poly::{self, Poly};

/// An algebraic number: irreducible primitive integer polynomial with positive
/// leading coefficient plus a disc around exactly one of its roots.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    min_poly: Poly,
    center: Complex,
    radius: f64,
}

/// `r * zeta_m^k` with `r > 0` rational, `0 <= k < m`, `gcd(k, m) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledRootOfUnity {
    pub modulus: Rational,
    pub order: u64,
    pub exponent: u64,
}

impl AlgebraicNumber {
    pub fn from_rational(q: &Rational) -> Self {
        let p = poly::primitive(&[Integer::from(-q.numer()), q.denom().clone()]);
        AlgebraicNumber {
            min_poly: p,
            center: Complex::from_rational(DEFAULT_PRECISION, q),
            radius: 0.0,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    /// `zeta_m^k = exp(2 pi i k / m)`.
    pub fn root_of_unity(m: u64, k: i64) -> Result<Self> {
        if m == 0 {
            return invalid("root of unity order must be positive");
        }
        let k = k.rem_euclid(m as i64) as u64;
        let g = gcd_u64(k, m);
        let (k, m) = (k / g, m / g);
        let turns = Float::with_val(DEFAULT_PRECISION, k) / Float::with_val(DEFAULT_PRECISION, m);
        let z = Complex::unit(DEFAULT_PRECISION, &turns);
        // conjugates sit on the unit circle at spacing >= 2 sin(pi/m)
        let radius = (std::f64::consts::PI / m as f64).sin() * 0.5;
        Ok(AlgebraicNumber { min_poly: poly::cyclotomic(m), center: z, radius })
    }

    /// `r * zeta_m^k` for rational `r != 0`.
    pub fn scaled_root_of_unity(r: &Rational, m: u64, k: i64) -> Result<Self> {
        if *r == 0 {
            return invalid("zero is not a unit of the torus");
        }
        let z = Self::root_of_unity(m, k)?;
        z.mul_rational(r)
    }

    /// The root of `poly` closest to `guess`; `poly` must be irreducible.
    pub fn new(poly: Poly, guess: &Complex) -> Result<Self> {
        if poly::degree(&poly) < 1 {
            return invalid("minimal polynomial must have positive degree");
        }
        if poly::content(&poly) != 1 || !poly::is_irreducible(&poly)? {
            return Err(Error::Reducible(format!(
                "{} is not irreducible with content 1",
                poly::to_string(&poly, "x")
            )));
        }
        Self::pick_root(poly::primitive(&poly), guess)
    }

    /// The root nearest `guess` of some irreducible factor of `poly`.
    pub fn root_of(poly: &[Integer], guess: &Complex) -> Result<Self> {
        let factors = poly::factor(poly)?;
        let prec = DEFAULT_PRECISION;
        let mut best: Option<(Float, Poly)> = None;
        for (f, _) in factors {
            for r in poly::complex_roots(&f, prec)? {
                let d = (&r - guess).abs();
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, f.clone()));
                }
            }
        }
        match best {
            Some((_, f)) => Self::pick_root(f, guess),
            None => invalid("polynomial has no roots"),
        }
    }

    fn pick_root(p: Poly, guess: &Complex) -> Result<Self> {
        let prec = DEFAULT_PRECISION;
        let roots = poly::complex_roots(&p, prec)?;
        let (idx, _) = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (r - guess).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let center = roots[idx].clone();
        let sep = roots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, r)| (r - &center).abs_f64())
            .fold(f64::INFINITY, f64::min);
        let mut out = AlgebraicNumber { min_poly: p, center, radius: if sep.is_finite() { sep / 3.0 } else { 0.0 } };
        if let Some(q) = out.as_rational() {
            out.center = Complex::from_rational(prec, &q);
        }
        Ok(out)
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.min_poly) as usize
    }

    /// Centre of the isolating disc (128-bit).
    pub fn approx(&self) -> &Complex {
        &self.center
    }

    pub fn isolating_radius(&self) -> f64 {
        self.radius
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.degree() == 1).then(|| {
            Rational::from((Integer::from(-&self.min_poly[0]), self.min_poly[1].clone()))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 1 && self.min_poly[0].is_zero()
    }

    /// Value refined by Newton's method to `prec` bits.
    pub fn value(&self, prec: u32) -> Complex {
        if let Some(q) = self.as_rational() {
            return Complex::from_rational(prec, &q);
        }
        let d = poly::derivative(&self.min_poly);
        let mut z = self.center.with_prec(prec + 16);
        for _ in 0..(prec / 16 + 8) {
            let step = &poly::eval_complex(&self.min_poly, &z) / &poly::eval_complex(&d, &z);
            z = &z - &step;
            if step.is_zero() {
                break;
            }
        }
        z.with_prec(prec)
    }

    /// Recognises `r * zeta` with `r` rational, if this number has that shape.
    pub fn as_scaled_root_of_unity(&self) -> Option<ScaledRootOfUnity> {
        let d = self.degree();
        let p = &self.min_poly;
        if p[0].is_zero() {
            return None;
        }
        // all conjugates of r*zeta share |r|, so |a_0 / a_d| = r^d
        let ratio = Rational::from((p[0].clone().abs(), p[d].clone()));
        let num = exact_root(ratio.numer(), d as u32)?;
        let den = exact_root(ratio.denom(), d as u32)?;
        let r = Rational::from((num, den));
        // p(r x) / (a_d r^d) must be a cyclotomic polynomial
        let scaled: Poly = {
            let mut acc = Vec::with_capacity(d + 1);
            for (i, c) in p.iter().enumerate() {
                let v = c * r.clone().pow_i(i as i32);
                acc.push(v);
            }
            let lead = acc[d].clone();
            let mut out = Vec::with_capacity(d + 1);
            for v in acc {
                let q = v / &lead;
                if !q.is_integer() {
                    return None;
                }
                out.push(q.numer().clone());
            }
            out
        };
        for m in 1..=(2 * d as u64 * d as u64 + 2) {
            if poly::euler_phi(m) as usize != d {
                continue;
            }
            if poly::cyclotomic(m) == scaled {
                let arg = self.center.arg().to_f64();
                let turns = arg / (2.0 * std::f64::consts::PI);
                let k = (turns * m as f64).round().rem_euclid(m as f64) as u64;
                return Some(ScaledRootOfUnity { modulus: r, order: m, exponent: k % m });
            }
        }
        None
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.as_scaled_root_of_unity().is_some_and(|s| s.modulus == 1)
    }

    pub fn mul_rational(&self, r: &Rational) -> Result<Self> {
        if *r == 0 {
            return Ok(Self::from_integer(0));
        }
        // q(x) = p(x / r) * (num^d)
        let d = self.degree();
        let (num, den) = (r.numer(), r.denom());
        let mut q: Poly = Vec::with_capacity(d + 1);
        for (i, c) in self.min_poly.iter().enumerate() {
            let v = (c * den.pow_ref(i as u32))
                * num.pow_ref((d - i) as u32);
            q.push(v);
        }
        let q = poly::primitive(&q);
        let p = self.center.prec();
        let center = self.center.scale(&Float::with_val(p, r));
        let rf = r.to_f64().abs();
        Ok(AlgebraicNumber { min_poly: q, center, radius: self.radius * rf })
    }

    pub fn weil_height(&self) -> Float {
        weil_height(self)
    }
}

trait PowRef {
    fn pow_ref(&self, e: u32) -> Integer;
}

impl PowRef for Integer {
    fn pow_ref(&self, e: u32) -> Integer {
        use rug::ops::Pow;
        Integer::from(self.pow(e))
    }
}

trait PowI {
    fn pow_i(self, e: i32) -> Rational;
}

impl PowI for Rational {
    fn pow_i(self, e: i32) -> Rational {
        use rug::ops::Pow;
        self.pow(e)
    }
}

fn exact_root(n: &Integer, d: u32) -> Option<Integer> {
    let r = Integer::from(n.root_ref(d));
    (r.pow_ref(d) == *n).then_some(r)
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.min_poly != other.min_poly {
            return false;
        }
        if self.degree() == 1 {
            return true;
        }
        let d = (&self.center - &other.center).abs_f64();
        d <= self.radius.max(other.radius)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        if let Some(s) = self.as_scaled_root_of_unity() {
            if s.modulus == 1 {
                return write!(f, "zeta_{}^{}", s.order, s.exponent);
            }
            return write!(f, "{}*zeta_{}^{}", s.modulus, s.order, s.exponent);
        }
        write!(f, "root of {} near {}", poly::to_string(&self.min_poly, "x"), self.center)
    }
}

/// Logarithmic Mahler measure `log|a_d| + sum log max(1, |root|)`.
pub fn log_mahler_measure(p: &[Integer], prec: u32) -> Result<Float> {
    let d = poly::degree(p);
    if d < 0 {
        return invalid("Mahler measure of the zero polynomial");
    }
    let wp = prec + 32;
    let mut m = numeric::ln_integer(wp, &poly::lead(p).clone().abs());
    for r in poly::complex_roots(p, wp)? {
        let a = r.abs();
        if a > 1 {
            m += a.ln();
        }
    }
    Ok(Float::with_val(prec, m))
}

/// Absolute logarithmic Weil height, `(1/d) log M(minpoly)`.
pub fn weil_height(a: &AlgebraicNumber) -> Float {
    weil_height_prec(a, DEFAULT_PRECISION)
}

pub fn weil_height_prec(a: &AlgebraicNumber, prec: u32) -> Float {
    if let Some(q) = a.as_rational() {
        if q == 0 {
            return Float::new(prec);
        }
        let big = q.numer().clone().abs().max(q.denom().clone());
        return numeric::ln_integer(prec, &big);
    }
    if a.is_root_of_unity() {
        return Float::new(prec);
    }
    let m = log_mahler_measure(&a.min_poly, prec).expect("roots of an irreducible polynomial");
    let h = m / a.degree() as u32;
    if h < 0 {
        Float::new(prec)
    } else {
        h
    }
}

/// Checks that a polynomial is a valid minimal polynomial and returns the height
/// of its root nearest `guess` (the height does not depend on the root).
pub fn weil_height_of_poly(p: &[Integer]) -> Result<Float> {
    let n = AlgebraicNumber::new(p.to_vec(), &Complex::zero(DEFAULT_PRECISION))?;
    Ok(weil_height(&n))
}

#[derive(Serialize, Deserialize)]
struct AlgebraicJson {
    min_poly: Vec<serde_json::Value>,
    approx: [String; 2],
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraicJson {
            min_poly: self.min_poly.iter().map(int_to_json).collect(),
            approx: [
                numeric::fmt_real(&self.center.re, 30),
                numeric::fmt_real(&self.center.im, 30),
            ],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AlgebraicJson::deserialize(d)?;
        let p: Poly = j
            .min_poly
            .iter()
            .map(int_from_json)
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        let re = numeric::parse_real(DEFAULT_PRECISION, &j.approx[0]).map_err(D::Error::custom)?;
        let im = numeric::parse_real(DEFAULT_PRECISION, &j.approx[1]).map_err(D::Error::custom)?;
        AlgebraicNumber::new(p, &Complex::new(re, im)).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() < tol
    }

    #[test]
    fn heights_of_basic_numbers() {
        assert!(close(&weil_height(&AlgebraicNumber::from_integer(2)), 2f64.ln(), 1e-15));
        let z6 = AlgebraicNumber::root_of_unity(6, 1).unwrap();
        assert!(weil_height(&z6).is_zero());
        let phi = AlgebraicNumber::new(poly::from_i64(&[-1, -1, 1]), &Complex::from_f64(128, 1.6, 0.0)).unwrap();
        // independent oracle: only the root (1+sqrt5)/2 exceeds 1
        let oracle = 0.5 * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(close(&weil_height(&phi), oracle, 1e-15));
        assert!(close(&weil_height(&phi), 0.2406059125, 1e-9));
    }

    #[test]
    fn reducible_rejected() {
        let r = AlgebraicNumber::new(poly::from_i64(&[-1, 0, 1]), &Complex::one(128));
        assert!(matches!(r, Err(Error::Reducible(_))));
    }

    #[test]
    fn recognises_scaled_roots_of_unity() {
        let a = AlgebraicNumber::scaled_root_of_unity(&Rational::from((3, 2)), 6, 5).unwrap();
        let s = a.as_scaled_root_of_unity().unwrap();
        assert_eq!(s, ScaledRootOfUnity { modulus: Rational::from((3, 2)), order: 6, exponent: 5 });
        let m2 = AlgebraicNumber::from_integer(-2).as_scaled_root_of_unity().unwrap();
        assert_eq!((m2.order, m2.exponent), (2, 1));
        let sqrt2 = AlgebraicNumber::new(poly::from_i64(&[-2, 0, 1]), &Complex::one(128)).unwrap();
        // sqrt 2 has |a0/a2| = 2, not a perfect square
        assert!(sqrt2.as_scaled_root_of_unity().is_none());
    }

    #[test]
    fn json_round_trip() {
        let z = AlgebraicNumber::root_of_unity(5, 2).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        let back: AlgebraicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }
}
