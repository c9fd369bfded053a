//! The j-function: exact integer q-expansion and high-precision evaluation on `H`.

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use super::upper_half::{reduce_to_fundamental_domain, Mat2, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::numeric::{self, Complex};

/// Power series `sum_k c_k q^k` truncated after `len` terms, integer coefficients.
fn series_mul(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// Inverse of a series with constant term 1.
fn series_inv_unit(a: &[Integer], len: usize) -> Vec<Integer> {
    debug_assert_eq!(a[0], 1);
    let mut out = vec![Integer::new(); len];
    out[0] = Integer::from(1);
    for n in 1..len {
        let mut s = Integer::new();
        for k in 1..=n.min(a.len() - 1) {
            s += Integer::from(&a[k] * &out[n - k]);
        }
        out[n] = -s;
    }
    out
}

fn sigma3(n: u64) -> Integer {
    crate::poly::divisors(n).into_iter().fold(Integer::new(), |s, d| s + Integer::from(d).pow(3))
}

/// `prod_{n >= 1} (1 - q^n)` from the pentagonal number theorem.
fn euler_product(len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    out[0] = Integer::from(1);
    for k in 1i64.. {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        if g1 >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out[g1] += sign;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g2 < len {
            out[g2] += sign;
        }
    }
    out
}

/// Coefficients `c_{-1}, c_0, c_1, ..., c_{n}` of `j = sum c_k q^k`.
pub fn j_coefficients(n: usize) -> Vec<Integer> {
    let len = n + 2;
    let mut e4 = vec![Integer::from(1)];
    e4.extend((1..len as u64).map(|k| sigma3(k) * 240u32));
    let e4_3 = series_mul(&series_mul(&e4, &e4, len), &e4, len);
    let eta = euler_product(len);
    let mut eta24 = vec![Integer::from(1)];
    for _ in 0..24 {
        eta24 = series_mul(&eta24, &eta, len);
    }
    series_mul(&e4_3, &series_inv_unit(&eta24, len), len)
}

pub const MAX_J_TERMS: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct JValue {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex,
    #[serde(serialize_with = "ser_point")]
    pub reduced: UpperHalfPoint,
    pub gamma: Mat2,
    pub precision_bits: u32,
    pub working_precision_bits: u32,
    /// Number of q-series terms of `E4` summed.
    pub terms: usize,
    /// Absolute bound on the error of `value` caused by truncating the series.
    #[serde(serialize_with = "ser_float")]
    pub tail_bound: Float,
}

fn ser_complex<S: serde::Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
    [numeric::fmt_real(&z.re, 40), numeric::fmt_real(&z.im, 40)].serialize(s)
}

fn ser_point<S: serde::Serializer>(z: &UpperHalfPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_complex(z.value(), s)
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    numeric::fmt_real(x, 6).serialize(s)
}

pub fn j_eval(z: &UpperHalfPoint, precision_bits: u32) -> Result<JValue> {
    j_eval_with_limit(z, precision_bits, MAX_J_TERMS)
}

/// `j(z) = E4(q)^3 / (q prod (1 - q^n)^24)` after moving `z` into the fundamental domain.
pub fn j_eval_with_limit(z: &UpperHalfPoint, precision_bits: u32, max_terms: usize) -> Result<JValue> {
    if precision_bits < 2 {
        return Err(Error::InvalidInput("precision must be at least 2 bits".into()));
    }
    let size_bits = z.value().abs().to_f64().max(1.0).log2().ceil() as u32;
    let wp = precision_bits + 48 + 2 * size_bits;
    let (reduced, gamma) = reduce_to_fundamental_domain(&z.with_prec(wp))?;
    let tau = reduced.value();
    let two_pi_i = Complex::new(Float::new(wp), numeric::pi(wp) * 2u32);
    let q = (&two_pi_i * tau).exp();
    let qabs = q.abs();

    // E4 tail: sum_{n > M} 240 sigma_3(n) |q|^n <= 240 * 1.21 * sum n^3 |q|^n, and
    // (n+1)^3 |q| / n^3 <= 8 |q| < 1/2 for n >= 1, so the tail is at most twice its first term
    let target = Float::with_val(wp, Float::i_exp(1, -(precision_bits as i32) - 24)) * &qabs;
    let tail_at = |m: usize| -> Float {
        let n = Float::with_val(wp, m + 1);
        let nq: Float = qabs.clone().pow(m as u32 + 1);
        Float::with_val(wp, 2u32) * 240u32 * 1.21f64 * n.pow(3) * nq
    };
    let mut m = 1usize;
    while tail_at(m) > target {
        m += 1;
        if m > max_terms {
            return Err(Error::Precision(format!(
                "j series needs more than {max_terms} terms at {precision_bits} bits; lower the precision or raise the term limit"
            )));
        }
    }
    let e4_tail = tail_at(m);

    let mut e4 = Complex::one(wp);
    let mut qn = Complex::one(wp);
    for n in 1..=m {
        qn = &qn * &q;
        let s = numeric::from_integer(wp, &(sigma3(n as u64) * 240u32));
        e4 = e4 + qn.scale(&s);
    }
    // pentagonal series for prod (1 - q^n); stop when |q|^g is below the target
    let mut prod = Complex::one(wp);
    let mut euler_tail = Float::with_val(wp, 0);
    for k in 1i64.. {
        let g1 = (k * (3 * k - 1) / 2) as u64;
        let g2 = (k * (3 * k + 1) / 2) as u64;
        let t1 = qabs.clone().pow(g1 as u32);
        if t1 < target {
            euler_tail = t1 * 4u32;
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let term = q.powu(g1) + q.powu(g2);
        prod = if sign > 0 { prod + term } else { prod - term };
    }
    let p24 = prod.powu(24);
    let e4c = e4.powu(3);
    let value = &e4c / &(&q * &p24);

    // first-order propagation, doubled for safety
    let e4abs = e4.abs();
    let inv_den = (&q * &p24).abs().recip();
    let d_e4 = Float::with_val(wp, 3u32) * e4abs.clone().square() * &e4_tail * &inv_den;
    let d_p = value.abs() * 24u32 * &euler_tail / prod.abs();
    let tail_bound = Float::with_val(53, (d_e4 + d_p) * 2u32);

    Ok(JValue {
        value: value.with_prec(precision_bits),
        reduced: reduced.with_prec(precision_bits),
        gamma,
        precision_bits,
        working_precision_bits: wp,
        terms: m,
        tail_bound,
    })
}

/// `j(z)` as a complex number at `precision_bits`.
pub fn j_value(z: &UpperHalfPoint, precision_bits: u32) -> Result<Complex> {
    Ok(j_eval(z, precision_bits)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_coefficients() {
        let c = j_coefficients(4);
        let expect = [1i64, 744, 196884, 21493760, 864299970, 20245856256];
        for (x, e) in c.iter().zip(expect) {
            assert_eq!(*x, e);
        }
    }

    #[test]
    fn cm_values() {
        let i = UpperHalfPoint::from_f64(128, 0.0, 1.0).unwrap();
        let j = j_eval(&i, 128).unwrap();
        assert!((&j.value - &Complex::from_f64(128, 1728.0, 0.0)).abs_f64() < 1e-30);
        let rho = UpperHalfPoint::new(Complex::new(
            Float::with_val(128, 0.5),
            Float::with_val(128, 3).sqrt() / 2u32,
        ))
        .unwrap();
        assert!(j_eval(&rho, 128).unwrap().value.abs_f64() < 1e-25);
        // j((1 + i sqrt 7) / 2) = -3375
        let z = UpperHalfPoint::new(Complex::new(Float::with_val(128, 0.5), Float::with_val(128, 7).sqrt() / 2u32))
            .unwrap();
        assert!((&j_value(&z, 128).unwrap() - &Complex::from_f64(128, -3375.0, 0.0)).abs_f64() < 1e-25);
    }

    #[test]
    fn agrees_with_exact_series() {
        // oracle: the integer q-expansion summed directly at a point with small |q|
        let z = UpperHalfPoint::from_f64(200, 0.1, 1.7).unwrap();
        let c = j_coefficients(60);
        let q = (Complex::new(Float::new(200), numeric::pi(200) * 2u32) * z.value()).exp();
        let mut s = Complex::zero(200);
        for (k, ck) in c.iter().enumerate() {
            s = s + q.powi(k as i64 - 1).scale(&numeric::from_integer(200, ck));
        }
        let j = j_eval(&z, 160).unwrap();
        assert!((&j.value - &s).abs_f64() / s.abs_f64() < 1e-40);
        assert!(j.tail_bound.to_f64() < 1e-40 * s.abs_f64());
    }

    #[test]
    fn translation_is_bit_identical() {
        let z = UpperHalfPoint::from_f64(128, 0.25, 1.1).unwrap();
        let w = UpperHalfPoint::from_f64(128, 1.25, 1.1).unwrap();
        assert_eq!(j_value(&z, 128).unwrap(), j_value(&w, 128).unwrap());
    }

    #[test]
    fn term_limit_reported() {
        let z = UpperHalfPoint::from_f64(64, 0.0, 1.0).unwrap();
        assert!(matches!(j_eval_with_limit(&z, 4096, 10), Err(Error::Precision(_))));
    }
}
