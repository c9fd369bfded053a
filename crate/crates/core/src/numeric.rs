//! High-precision real and complex scalars.
//!
//! Reals are MPFR floats ([`rug::Float`]); [`Complex`] is a plain pair of
//! them. Binary operations take the larger precision of their operands.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{invalid, Result};

/// Default mantissa size in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Small conveniences missing from `rug::Integer` in the version we pin.
pub trait IntExt {
    fn is_zero(&self) -> bool;
    fn div_floor_by(&self, d: &Integer) -> Integer;
    fn div_trunc_by(&self, d: &Integer) -> Integer;
    /// Quotient rounded to nearest (ties away from zero).
    fn div_round_by(&self, d: &Integer) -> Integer;
    fn ext_gcd(&self, other: &Integer) -> (Integer, Integer, Integer);
}

impl IntExt for Integer {
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn div_floor_by(&self, d: &Integer) -> Integer {
        <(Integer, Integer)>::from(self.div_rem_floor_ref(d)).0
    }
    fn div_trunc_by(&self, d: &Integer) -> Integer {
        <(Integer, Integer)>::from(self.div_rem_ref(d)).0
    }
    fn div_round_by(&self, d: &Integer) -> Integer {
        <(Integer, Integer)>::from(self.div_rem_round_ref(d)).0
    }
    fn ext_gcd(&self, other: &Integer) -> (Integer, Integer, Integer) {
        <(Integer, Integer, Integer)>::from(self.gcd_cofactors_ref(other))
    }
}

pub fn real(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn from_integer(prec: u32, v: &Integer) -> Float {
    Float::with_val(prec, v)
}

pub fn from_rational(prec: u32, v: &Rational) -> Float {
    Float::with_val(prec, v)
}

/// Parses a decimal (or `p/q`) real at the given precision.
pub fn parse_real(prec: u32, s: &str) -> Result<Float> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let q = parse_rational(&format!("{}/{}", n.trim(), d.trim()))?;
        return Ok(from_rational(prec, &q));
    }
    match Float::parse(s) {
        Ok(p) => Ok(Float::with_val(prec, p)),
        Err(_) => invalid(format!("cannot parse real number {s:?}")),
    }
}

/// Parses `p`, `p/q` or a terminating decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Rational>() {
        return Ok(q);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()),
        None => (s, Some(0)),
    };
    let Some(exp) = exp else {
        return invalid(format!("cannot parse rational {s:?}"));
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return invalid(format!("cannot parse rational {s:?}"));
    }
    let mut q = Rational::from(digits.parse::<Integer>().unwrap());
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    if scale >= 0 {
        q *= ten.pow(scale as u32);
    } else {
        q /= ten.pow((-scale) as u32);
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Natural logarithm of a positive integer of any size.
pub fn ln_integer(prec: u32, v: &Integer) -> Float {
    let v = v.clone().abs();
    let bits = v.significant_bits();
    if bits <= prec + 32 {
        return Float::with_val(prec, &v).ln();
    }
    // split off the low bits so the conversion stays cheap for huge inputs
    let shift = bits - prec - 32;
    let top = Integer::from(&v >> shift);
    let ln2 = Float::with_val(prec, Constant::Log2);
    Float::with_val(prec, &top).ln() + ln2 * shift
}

/// Renders a float with `digits` significant decimal digits.
pub fn fmt_real(v: &Float, digits: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    v.to_string_radix(10, Some(digits))
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        let re = fmt_real(&self.re, digits.max(6));
        let im = fmt_real(&self.im, digits.max(6));
        if im.starts_with('-') {
            write!(f, "{re}{im}i")
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(x: Float) -> Self {
        let p = x.prec();
        Complex::new(x, Float::new(p))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Complex::from_real(from_rational(prec, q))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Complex::new(
            Float::with_val(p, &self.re * s),
            Float::with_val(p, &self.im * s),
        )
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re / &d),
            Float::with_val(p, -(self.im.clone()) / &d),
        )
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Complex::new(m.clone() * c, m * s)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Complex::zero(p);
        }
        let re = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
        let im_abs = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
        let im = if self.im.is_sign_negative() { -im_abs } else { im_abs };
        Complex::new(re, im)
    }

    pub fn powu(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            self.powu(n as u64)
        } else {
            self.powu(n.unsigned_abs()).recip()
        }
    }

    /// `exp(2*pi*i*x)` for a real `x`.
    pub fn unit(prec: u32, turns: &Float) -> Self {
        let angle = Float::with_val(prec, turns * pi(prec)) * 2u32;
        let (s, c) = angle.sin_cos(Float::new(prec));
        Complex::new(c, s)
    }

    /// Parses `a+bi`, `a-bi`, `bi`, `a`, `i` with decimal components.
    pub fn parse(prec: u32, s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return invalid("empty complex number");
        }
        let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('I')) else {
            return Ok(Complex::from_real(parse_real(prec, &t)?));
        };
        // find the sign separating real and imaginary parts, skipping exponent signs
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im_s = match im_s {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        Ok(Complex::new(parse_real(prec, re_s)?, parse_real(prec, im_s)?))
    }
}

macro_rules! complex_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Complex> for &'a Complex {
            type Output = Complex;
            fn $method(self, rhs: &'a Complex) -> Complex {
                let f: fn(&Complex, &Complex) -> Complex = $body;
                f(self, rhs)
            }
        }
        impl $trait<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &'a Complex) -> Complex {
                (&self).$method(rhs)
            }
        }
    };
}

complex_binop!(Add, add, |a, b| {
    let p = a.prec().max(b.prec());
    Complex::new(
        Float::with_val(p, &a.re + &b.re),
        Float::with_val(p, &a.im + &b.im),
    )
});

complex_binop!(Sub, sub, |a, b| {
    let p = a.prec().max(b.prec());
    Complex::new(
        Float::with_val(p, &a.re - &b.re),
        Float::with_val(p, &a.im - &b.im),
    )
});

complex_binop!(Mul, mul, |a, b| {
    let p = a.prec().max(b.prec());
    let rr = Float::with_val(p, &a.re * &b.re);
    let ii = Float::with_val(p, &a.im * &b.im);
    let ri = Float::with_val(p, &a.re * &b.im);
    let ir = Float::with_val(p, &a.im * &b.re);
    Complex::new(rr - ii, ri + ir)
});

complex_binop!(Div, div, |a, b| a * &b.recip());

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re.clone(), -self.im.clone())
    }
}

/// Volume of the Euclidean unit ball in `n` dimensions, `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(prec: u32, n: u32) -> Float {
    let p = pi(prec);
    if n.is_multiple_of(2) {
        let k = n / 2;
        let mut fact = Integer::from(1);
        for i in 2..=k {
            fact *= i;
        }
        Float::with_val(prec, p.pow(k)) / Float::with_val(prec, &fact)
    } else {
        // Gamma(n/2 + 1) = sqrt(pi) * n!! / 2^((n+1)/2)
        let mut dfact = Integer::from(1);
        let mut i = n;
        while i > 1 {
            dfact *= i;
            i -= 2;
        }
        let gamma = Float::with_val(prec, p.sqrt_ref()) * Float::with_val(prec, &dfact)
            / Float::with_val(prec, Integer::from(1) << n.div_ceil(2));
        Float::with_val(prec, pi(prec).pow(n / 2)) * Float::with_val(prec, pi(prec).sqrt_ref())
            / gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_complex_forms() {
        let z = Complex::parse(64, "0.5+2i").unwrap();
        assert_eq!(z.re.to_f64(), 0.5);
        assert_eq!(z.im.to_f64(), 2.0);
        let z = Complex::parse(64, "-1.5e-1-i").unwrap();
        assert_eq!(z.re.to_f64(), -0.15);
        assert_eq!(z.im.to_f64(), -1.0);
        let z = Complex::parse(64, "3i").unwrap();
        assert_eq!(z.re.to_f64(), 0.0);
        assert_eq!(z.im.to_f64(), 3.0);
        assert!(Complex::parse(64, "x").is_err());
    }

    #[test]
    fn parse_rational_decimal() {
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("-3/6").unwrap(), Rational::from((-1, 2)));
        assert_eq!(parse_rational("1.5e2").unwrap(), Rational::from(150));
    }

    #[test]
    fn ball_volumes_match_closed_forms() {
        let v2 = unit_ball_volume(128, 2).to_f64();
        let v3 = unit_ball_volume(128, 3).to_f64();
        let v4 = unit_ball_volume(128, 4).to_f64();
        let pi = std::f64::consts::PI;
        assert!((v2 - pi).abs() < 1e-14);
        assert!((v3 - 4.0 * pi / 3.0).abs() < 1e-14);
        assert!((v4 - pi * pi / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(128, 1).to_f64() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ln_of_huge_integer() {
        let big = Integer::from(1) << 100_000u32;
        let v = ln_integer(128, &big).to_f64();
        assert!((v - 100_000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn exp_and_sqrt() {
        let z = Complex::from_f64(128, 0.0, std::f64::consts::PI);
        let e = z.exp();
        assert!((e.re.to_f64() + 1.0).abs() < 1e-15);
        let s = Complex::from_f64(128, -4.0, 0.0).sqrt();
        assert!((s.im.to_f64() - 2.0).abs() < 1e-15);
    }
}
