//! Real algebraic numbers of degree `<= k` and k-height `<= T` in an interval.
//!
//! Every such number is a root of an integer polynomial of degree `<= k` with coefficients in
//! `[-T, T]`, so those polynomials are enumerated; each is split into irreducible factors
//! (rational roots are found exactly, the remaining factor of degree `<= 3` is then
//! irreducible) and the distinct minimal polynomials with a root in the interval are kept.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize, Serializer};

use super::height::{k_height_of_min_poly, KHeightValue};
use crate::algebraic::AlgebraicNumber;
use crate::error::{invalid, Error, Result};
use crate::numeric::{self, Complex, DEFAULT_PRECISION};
use crate::poly::{self, Poly};

/// Closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: impl Into<Rational>, hi: impl Into<Rational>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo > hi {
            return invalid(format!("empty interval [{lo}, {hi}]"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn parse(lo: &str, hi: &str) -> Result<Self> {
        Self::new(numeric::parse_rational(lo)?, numeric::parse_rational(hi)?)
    }

    pub fn unit() -> Self {
        Interval { lo: Rational::new(), hi: Rational::from(1) }
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn contains(&self, x: &Float) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    fn f64_bounds(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo.to_string(), self.hi.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = <[serde_json::Value; 2]>::deserialize(d)?;
        let q = |v: &serde_json::Value| -> Result<Rational> {
            match v {
                serde_json::Value::String(s) => numeric::parse_rational(s),
                serde_json::Value::Number(n) => numeric::parse_rational(&n.to_string()),
                other => invalid(format!("expected a rational endpoint, got {other}")),
            }
        };
        let lo = q(&v[0]).map_err(D::Error::custom)?;
        let hi = q(&v[1]).map_err(D::Error::custom)?;
        Interval::new(lo, hi).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_k: usize,
    pub max_t: u64,
    /// Coefficient vectors (or fractions for `k = 1`) examined.
    pub max_vectors: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_k: 3, max_t: 10_000, max_vectors: 60_000_000 }
    }
}

/// A real algebraic number given by its primitive minimal polynomial and a 128-bit value.
#[derive(Clone, Debug)]
pub struct BoundedNumber {
    pub min_poly: Poly,
    pub value: Float,
    pub rational: Option<Rational>,
}

impl BoundedNumber {
    pub fn from_rational(q: Rational) -> Self {
        BoundedNumber {
            min_poly: poly::primitive(&[Integer::from(-q.numer()), q.denom().clone()]),
            value: Float::with_val(DEFAULT_PRECISION, &q),
            rational: Some(q),
        }
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.min_poly) as usize
    }

    pub fn k_height(&self, k: usize) -> Result<KHeightValue> {
        k_height_of_min_poly(&self.min_poly, k)
    }

    pub fn to_algebraic(&self) -> Result<AlgebraicNumber> {
        AlgebraicNumber::new(self.min_poly.clone(), &Complex::from_real(self.value.clone()))
    }

    /// Same number, exact comparison of minimal polynomials and closeness of values.
    pub fn same_as(&self, o: &BoundedNumber) -> bool {
        match (&self.rational, &o.rational) {
            (Some(a), Some(b)) => a == b,
            (None, None) => {
                self.min_poly == o.min_poly && Float::with_val(64, &self.value - &o.value).abs().to_f64() < 1e-20
            }
            _ => false,
        }
    }
}

impl fmt::Display for BoundedNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{} [root of {}]", numeric::fmt_real(&self.value, 20), poly::to_string(&self.min_poly, "x")),
        }
    }
}

impl Serialize for BoundedNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J {
            value: String,
            min_poly: Vec<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            rational: Option<String>,
        }
        J {
            value: numeric::fmt_real(&self.value, 30),
            min_poly: self.min_poly.iter().map(|c| c.to_string()).collect(),
            rational: self.rational.as_ref().map(|q| q.to_string()),
        }
        .serialize(s)
    }
}

pub fn enumerate_bounded(k: usize, t: u64, interval: &Interval) -> Result<Vec<BoundedNumber>> {
    enumerate_bounded_with(k, t, interval, &EnumerationLimits::default())
}

/// Sorted by value, each number once.
pub fn enumerate_bounded_with(k: usize, t: u64, interval: &Interval, limits: &EnumerationLimits) -> Result<Vec<BoundedNumber>> {
    if k == 0 || t == 0 {
        return invalid("need k >= 1 and T >= 1");
    }
    if k > limits.max_k || t > limits.max_t {
        return Err(Error::ResourceBound {
            what: format!("enumeration with k = {k}, T = {t}"),
            limit: if k > limits.max_k { limits.max_k as u64 } else { limits.max_t },
            hint: "raise the enumeration limits".into(),
        });
    }
    let mut out = if k == 1 { farey(t, interval, limits)? } else { by_polynomials(k, t as i64, interval, limits)? };
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite"));
    Ok(out)
}

/// `p/q` with `max(|p|, q) <= t` in the interval.
fn farey(t: u64, iv: &Interval, limits: &EnumerationLimits) -> Result<Vec<BoundedNumber>> {
    let ti = Integer::from(t);
    let lo = iv.lo.clone().max(Rational::from(-&ti));
    let hi = iv.hi.clone().min(Rational::from(&ti));
    if lo > hi {
        return Ok(Vec::new());
    }
    let width = Rational::from(&hi - &lo).to_f64();
    let work = (width * (t as f64) * (t as f64 + 1.0) / 2.0) + t as f64;
    if work > limits.max_vectors as f64 {
        return Err(Error::ResourceBound {
            what: "fractions examined".into(),
            limit: limits.max_vectors,
            hint: "narrow the interval or lower T".into(),
        });
    }
    let rows: Vec<Vec<BoundedNumber>> = (1..=t)
        .into_par_iter()
        .map(|q| {
            let qi = Integer::from(q);
            let pmin = Rational::from(&lo * &qi).ceil().into_numer_denom().0;
            let pmax = Rational::from(&hi * &qi).floor().into_numer_denom().0;
            let (pmin, pmax) = (pmin.to_i64().expect("small").max(-(t as i64)), pmax.to_i64().expect("small").min(t as i64));
            (pmin..=pmax)
                .filter(|p| gcd(p.unsigned_abs(), q) == 1)
                .map(|p| BoundedNumber::from_rational(Rational::from((p, q))))
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn eval_f64(c: &[i64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci as f64)
}

/// Approximate real roots of `c` (degree `<= 3`) in `[lo, hi]`, including touching ones.
fn approx_roots(c: &[i64], lo: f64, hi: f64) -> Vec<f64> {
    let d = c.len() - 1;
    let mut pts = vec![lo, hi];
    let dc: Vec<f64> = (1..=d).map(|i| i as f64 * c[i] as f64).collect();
    match dc.len() {
        2 => pts.push(-dc[0] / dc[1]),
        3 => {
            let disc = dc[1] * dc[1] - 4.0 * dc[2] * dc[0];
            if disc >= 0.0 {
                let s = disc.sqrt();
                pts.push((-dc[1] + s) / (2.0 * dc[2]));
                pts.push((-dc[1] - s) / (2.0 * dc[2]));
            }
        }
        _ => {}
    }
    pts.retain(|x| x.is_finite() && *x >= lo && *x <= hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale: f64 = c.iter().map(|x| x.abs() as f64).sum::<f64>() * (1.0 + lo.abs().max(hi.abs())).powi(d as i32);
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (fa, fb) = (eval_f64(c, a), eval_f64(c, b));
        if fa * fb < 0.0 {
            let sa = fa.signum();
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if eval_f64(c, m).signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
    }
    for x in pts {
        if eval_f64(c, x).abs() <= 1e-9 * scale {
            out.push(x);
        }
    }
    out
}

/// Exact rational root near `r`, using that its denominator divides the leading coefficient.
fn rational_root_near(c: &[i64], r: f64) -> Option<(i64, i64)> {
    let lead = *c.last().unwrap();
    for q in 1..=lead.abs() {
        if lead % q != 0 {
            continue;
        }
        let p = (r * q as f64).round() as i64;
        let val = c.iter().enumerate().fold(0i128, |acc, (i, &ci)| {
            acc + ci as i128 * (p as i128).pow(i as u32) * (q as i128).pow((c.len() - 1 - i) as u32)
        });
        if val == 0 && gcd(p.unsigned_abs(), q as u64) == 1 {
            return Some((p, q));
        }
    }
    None
}

/// Divides `c` by `q x - p`.
fn deflate(c: &[i64], p: i64, q: i64) -> Vec<i64> {
    let d = c.len() - 1;
    let mut out = vec![0i64; d];
    let mut rem = c.to_vec();
    for i in (1..=d).rev() {
        let coef = rem[i] / q;
        out[i - 1] = coef;
        rem[i] -= coef * q;
        rem[i - 1] += coef * p;
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    out
}

fn primitive_key(c: &[i64]) -> Vec<i64> {
    let g = c.iter().fold(0u64, |g, x| gcd(g, x.unsigned_abs()));
    let s = if *c.last().unwrap() < 0 { -1 } else { 1 };
    c.iter().map(|x| s * x / g as i64).collect()
}

/// Irreducible factors of `c` with a root in `[lo, hi]` (with a small margin).
fn minimal_polys_in(c: &[i64], lo: f64, hi: f64, out: &mut Vec<Vec<i64>>) {
    let mut c = c.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
    if c.len() < 2 {
        return;
    }
    let margin = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    let roots = approx_roots(&c, lo - margin, hi + margin);
    if roots.is_empty() {
        return;
    }
    if c.len() == 2 {
        out.push(primitive_key(&c));
        return;
    }
    for r in &roots {
        if let Some((p, q)) = rational_root_near(&c, *r) {
            out.push(vec![-p, q]);
            let rest = deflate(&c, p, q);
            minimal_polys_in(&rest, lo, hi, out);
            return;
        }
    }
    // degree 2 or 3 without rational roots in the interval: check the others too
    if c.len() == 4 {
        let lead = c[3].abs() as f64;
        let bound = 1.0 + c.iter().map(|x| x.abs() as f64).fold(0.0, f64::max) / lead;
        for r in approx_roots(&c, -bound, bound) {
            if let Some((p, q)) = rational_root_near(&c, r) {
                let rest = deflate(&c, p, q);
                minimal_polys_in(&rest, lo, hi, out);
                return;
            }
        }
    }
    if c.len() == 3 {
        let disc = c[1] as i128 * c[1] as i128 - 4 * c[2] as i128 * c[0] as i128;
        let s = (disc as f64).sqrt().round() as i128;
        if (s - 1..=s + 1).any(|t| t >= 0 && t * t == disc) {
            // reducible over Q; its rational roots were not in the interval
            return;
        }
    }
    out.push(primitive_key(&c));
}

fn by_polynomials(k: usize, t: i64, iv: &Interval, limits: &EnumerationLimits) -> Result<Vec<BoundedNumber>> {
    let side = (2 * t + 1) as u64;
    let total = side.saturating_pow(k as u32 + 1);
    if total > limits.max_vectors {
        return Err(Error::ResourceBound {
            what: format!("coefficient vectors for k = {k}, T = {t}"),
            limit: limits.max_vectors,
            hint: "lower T or raise max_vectors".into(),
        });
    }
    let (lo, hi) = iv.f64_bounds();
    // parallel over the top two coefficients, the rest sequential
    let tops: Vec<(i64, i64)> = (-t..=t).flat_map(|a| (-t..=t).map(move |b| (a, b))).collect();
    let found: HashSet<Vec<i64>> = tops
        .par_iter()
        .fold(HashSet::new, |mut set, &(ck, ck1)| {
            let mut c = vec![0i64; k + 1];
            c[k] = ck;
            c[k - 1] = ck1;
            let inner = k - 1;
            let count = side.pow(inner as u32);
            let mut buf = Vec::new();
            for idx in 0..count {
                let mut rem = idx;
                for ci in c.iter_mut().take(inner) {
                    *ci = (rem % side) as i64 - t;
                    rem /= side;
                }
                // one of +-P: the top nonzero coefficient positive
                match c.iter().rposition(|&x| x != 0) {
                    Some(top) if top >= 1 && c[top] > 0 => {}
                    _ => continue,
                }
                buf.clear();
                minimal_polys_in(&c, lo, hi, &mut buf);
                set.extend(buf.drain(..));
            }
            set
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut polys: Vec<Vec<i64>> = found.into_iter().collect();
    polys.sort();
    let per: Vec<Result<Vec<BoundedNumber>>> = polys.par_iter().map(|m| exact_roots_in(m, iv)).collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn exact_roots_in(m: &[i64], iv: &Interval) -> Result<Vec<BoundedNumber>> {
    let prec = DEFAULT_PRECISION;
    let mp: Poly = m.iter().map(|&x| Integer::from(x)).collect();
    match m.len() {
        2 => {
            let q = Rational::from((-m[0], m[1]));
            Ok(if iv.contains_rational(&q) { vec![BoundedNumber::from_rational(q)] } else { vec![] })
        }
        3 => {
            let disc = Float::with_val(prec, m[1] as i128 * m[1] as i128 - 4 * m[2] as i128 * m[0] as i128).sqrt();
            let two_a = 2 * m[2];
            let roots = [
                Float::with_val(prec, -m[1] - Float::with_val(prec, &disc)) / two_a,
                Float::with_val(prec, -m[1] + disc) / two_a,
            ];
            Ok(roots
                .into_iter()
                .filter(|r| iv.contains(r))
                .map(|value| BoundedNumber { min_poly: mp.clone(), value, rational: None })
                .collect())
        }
        _ => Ok(poly::real_roots(&mp, prec)?
            .into_iter()
            .filter(|r| iv.contains(r))
            .map(|value| BoundedNumber { min_poly: mp.clone(), value, rational: None })
            .collect()),
    }
}

/// `1 + sum_{q <= t} phi(q)`, the number of reduced fractions in `[0, 1]` with denominator `<= t`.
pub fn farey_count(t: u64) -> u64 {
    1 + (1..=t).map(crate::poly::euler_phi).sum::<u64>()
}
