//! Classical modular polynomials `Phi_N(X, Y)` with exact integer coefficients.
//!
//! The roots of `Phi_N(X, j(tau))` in `X` are `j((a tau + b) / d)` over `ad = N`,
//! `0 <= b < d`, `gcd(a, b, d) = 1`. Their power sums are polynomials in `j` whose
//! coefficients are read off the polar part of integer q-expansions; the sum over `b`
//! of `zeta_d^{bn}` is an exact integer.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use super::jfunc::{j_coefficients, j_value};
use super::upper_half::UpperHalfPoint;
use crate::error::{invalid, Error, Result};
use crate::numeric::{self, Complex};
use crate::poly::{self, divisors, mobius};

pub const DEFAULT_MAX_LEVEL: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    level: u32,
    /// `coeffs[i][k]` multiplies `X^i Y^k`.
    coeffs: Vec<Vec<Integer>>,
}

/// `psi(N) = N prod_{p | N} (1 + 1/p)`, the number of cyclic subgroups of order `N`.
pub fn psi(n: u32) -> u64 {
    let n = n as u64;
    let mut r = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            r = r / p * (p + 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        r = r / m * (m + 1);
    }
    r
}

impl ModularPolynomial {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeff(&self, i: usize, k: usize) -> &Integer {
        static ZERO: OnceLock<Integer> = OnceLock::new();
        self.coeffs.get(i).and_then(|r| r.get(k)).unwrap_or_else(|| ZERO.get_or_init(Integer::new))
    }

    pub fn degree_x(&self) -> usize {
        self.coeffs.iter().rposition(|r| r.iter().any(|c| *c != 0)).unwrap_or(0)
    }

    pub fn degree_y(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|r| r.iter().rposition(|c| *c != 0))
            .max()
            .unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.coeffs.len();
        (0..d).all(|i| (0..d).all(|k| self.coeff(i, k) == self.coeff(k, i)))
    }

    /// `Phi(X, Y) = -Phi(Y, X)`, which happens only for `Phi_1 = X - Y`.
    pub fn is_antisymmetric(&self) -> bool {
        let d = self.coeffs.len();
        (0..d).all(|i| (0..d).all(|k| *self.coeff(i, k) == Integer::from(-self.coeff(k, i))))
    }

    /// Nonzero terms `(i, k, c)` for `c X^i Y^k`, sorted.
    pub fn terms(&self) -> Vec<(usize, usize, Integer)> {
        let mut out = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if *c != 0 {
                    out.push((i, k, c.clone()));
                }
            }
        }
        out
    }

    pub fn from_terms(level: u32, terms: &[(usize, usize, Integer)]) -> Self {
        let d = terms.iter().map(|t| t.0.max(t.1)).max().unwrap_or(0) + 1;
        let mut coeffs = vec![vec![Integer::new(); d]; d];
        for (i, k, c) in terms {
            coeffs[*i][*k] += c;
        }
        ModularPolynomial { level, coeffs }
    }

    pub fn eval(&self, x: &Complex, y: &Complex) -> Complex {
        let p = x.prec().max(y.prec());
        let mut acc = Complex::zero(p);
        for row in self.coeffs.iter().rev() {
            let mut inner = Complex::zero(p);
            for c in row.iter().rev() {
                inner = &(&inner * y) + &Complex::from_real(numeric::from_integer(p, c));
            }
            acc = &(&acc * x) + &inner;
        }
        acc
    }

    /// `log2` of the largest term `|c| |x|^i |y|^k`, used to size evaluation precision.
    pub fn log2_max_term(&self, x: &Complex, y: &Complex) -> f64 {
        let lx = x.abs().to_f64().max(1e-300).log2();
        let ly = y.abs().to_f64().max(1e-300).log2();
        self.terms()
            .iter()
            .map(|(i, k, c)| c.significant_bits() as f64 + *i as f64 * lx + *k as f64 * ly)
            .fold(0.0, f64::max)
    }

    /// Bivariate polynomial as a string in `X`, `Y`.
    pub fn to_string_xy(&self) -> String {
        let mut parts = Vec::new();
        for (i, k, c) in self.terms().into_iter().rev() {
            let mon = match (i, k) {
                (0, 0) => String::new(),
                _ => {
                    let f = |v: &str, e: usize| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        _ => format!("{v}^{e}"),
                    };
                    [f("X", i), f("Y", k)].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*")
                }
            };
            let s = match (mon.is_empty(), c.to_i32()) {
                (true, _) => c.to_string(),
                (false, Some(1)) => mon,
                (false, Some(-1)) => format!("-{mon}"),
                _ => format!("{c}*{mon}"),
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[derive(Serialize, Deserialize)]
struct PhiJson {
    level: u32,
    terms: Vec<(usize, usize, String)>,
}

impl Serialize for ModularPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PhiJson { level: self.level, terms: self.terms().into_iter().map(|(i, k, c)| (i, k, c.to_string())).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModularPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PhiJson::deserialize(d)?;
        let terms = j
            .terms
            .iter()
            .map(|(i, k, c)| c.parse::<Integer>().map(|c| (*i, *k, c)).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ModularPolynomial::from_terms(j.level, &terms))
    }
}

pub fn modular_polynomial(n: u32) -> Result<Arc<ModularPolynomial>> {
    modular_polynomial_bounded(n, DEFAULT_MAX_LEVEL)
}

pub fn modular_polynomial_bounded(n: u32, max_level: u32) -> Result<Arc<ModularPolynomial>> {
    if n == 0 {
        return invalid("level must be positive");
    }
    if n > max_level {
        return Err(Error::ResourceBound {
            what: "modular polynomial level".into(),
            limit: max_level as u64,
            hint: "raise the configured level bound; cost grows like N^3 psi(N)^3".into(),
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ModularPolynomial>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let p = Arc::new(compute(n));
    cache.lock().unwrap().insert(n, p.clone());
    Ok(p)
}

/// `sum_{0 <= b < d, gcd(b, g) = 1} zeta_d^{bn}` with `g | d`, by Moebius inversion over `e | g`.
fn coset_character_sum(g: u64, d: u64, n: i64) -> i64 {
    divisors(g)
        .into_iter()
        .map(|e| {
            let m = (d / e) as i64;
            if n % m == 0 {
                mobius(e) as i64 * m
            } else {
                0
            }
        })
        .sum()
}

fn compute(n: u32) -> ModularPolynomial {
    if n == 1 {
        return ModularPolynomial::from_terms(1, &[(1, 0, Integer::from(1)), (0, 1, Integer::from(-1))]);
    }
    let nn = n as usize;
    let deg = psi(n) as usize;
    let top = nn * deg; // largest pole order among the power sums
    let len = top + 1;
    // jq = q j, so j^m = q^{-m} jq^m; jpow[m][i] is the coefficient of q^{i - m} in j^m
    let jq = j_coefficients(top);
    let mut jpow: Vec<Vec<Integer>> = Vec::with_capacity(len);
    jpow.push({
        let mut v = vec![Integer::new(); len];
        v[0] = Integer::from(1);
        v
    });
    for m in 1..len {
        let prev = &jpow[m - 1];
        let keep = len;
        let mut next = vec![Integer::new(); len];
        for (i, x) in prev.iter().enumerate().take(keep) {
            if *x == 0 {
                continue;
            }
            for (k, y) in jq.iter().enumerate().take(keep - i) {
                next[i + k] += Integer::from(x * y);
            }
        }
        jpow.push(next);
    }

    let cosets: Vec<(u64, u64)> = divisors(n as u64).into_iter().map(|a| (a, n as u64 / a)).collect();
    // power sums p_k as polynomials in Y
    let power_sums: Vec<Vec<Integer>> = (1..=deg)
        .into_par_iter()
        .map(|k| {
            let pole = nn * k;
            // s[pole + m] is the coefficient of q^m, m in [-pole, 0]
            let mut s = vec![Integer::new(); pole + 1];
            for &(a, d) in &cosets {
                let g = crate::algebraic::gcd_u64(a, d);
                for nexp in -(k as i64)..=0 {
                    let w = coset_character_sum(g, d, nexp);
                    if w == 0 {
                        continue;
                    }
                    let e = a as i64 * nexp;
                    debug_assert_eq!(e % d as i64, 0);
                    let m = e / d as i64;
                    let c = &jpow[k][(nexp + k as i64) as usize];
                    s[(pole as i64 + m) as usize] += Integer::from(c * w);
                }
            }
            // peel off j^m from the most polar term down
            let mut p = vec![Integer::new(); pole + 1];
            for m in (0..=pole).rev() {
                let alpha = s[pole - m].clone();
                if alpha == 0 {
                    continue;
                }
                for i in 0..=m {
                    s[pole - m + i] -= Integer::from(&alpha * &jpow[m][i]);
                }
                p[m] = alpha;
            }
            poly::trim(p)
        })
        .collect();

    // Newton identities: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
    let mut e: Vec<Vec<Integer>> = vec![vec![Integer::from(1)]];
    for k in 1..=deg {
        let mut acc = Vec::new();
        for i in 1..=k {
            let t = poly::mul(&e[k - i], &power_sums[i - 1]);
            acc = if i % 2 == 1 { poly::add(&acc, &t) } else { poly::sub(&acc, &t) };
        }
        let kk = Integer::from(k);
        let ek: Vec<Integer> = acc
            .iter()
            .map(|c| {
                debug_assert!(c.is_divisible(&kk));
                Integer::from(c.div_exact_ref(&kk))
            })
            .collect();
        e.push(ek);
    }
    // Phi_N(X, Y) = sum_k (-1)^k e_k(Y) X^{deg - k}
    let mut coeffs = vec![vec![Integer::new(); deg + 1]; deg + 1];
    for (k, ek) in e.iter().enumerate() {
        for (y, c) in ek.iter().enumerate() {
            let v = if k % 2 == 0 { c.clone() } else { -c.clone() };
            coeffs[deg - k][y] = v;
        }
    }
    ModularPolynomial { level: n, coeffs }
}

/// `|Phi_N(j(z1), j(z2))|`, with the j-values and the evaluation carried at enough
/// precision that the cancellation among large terms leaves `precision_bits` of
/// absolute accuracy.
pub fn phi_residual(
    phi: &ModularPolynomial,
    z1: &UpperHalfPoint,
    z2: &UpperHalfPoint,
    precision_bits: u32,
) -> Result<Float> {
    let x0 = j_value(z1, 64)?;
    let y0 = j_value(z2, 64)?;
    let extra = phi.log2_max_term(&x0, &y0).max(0.0).ceil() as u32;
    let wp = precision_bits + extra + 32;
    let x = j_value(&z1.with_prec(wp), wp)?;
    let y = j_value(&z2.with_prec(wp), wp)?;
    Ok(Float::with_val(precision_bits, phi.eval(&x, &y).abs()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularRelation {
    pub level: u32,
    #[serde(serialize_with = "ser_float")]
    pub residual: Float,
    /// `residual` divided by the largest term `|c| |x|^i |y|^k` (floored at 1); this is what the
    /// tolerance is compared against, since the inputs carry only their own precision.
    pub relative_residual: f64,
    /// Numerical evidence only; an exact witness is a matrix `g` with `z2 = g z1`.
    pub heuristic: bool,
}

fn ser_float<S: serde::Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
    numeric::fmt_real(x, 6).serialize(s)
}

/// Smallest `N <= n_max` with `Phi_N(j(z1), j(z2))` below `tolerance` relative to its largest
/// term. A miss is evidence of
/// modular independence up to level `n_max`, not a proof.
pub fn detect_modular_relation(
    z1: &UpperHalfPoint,
    z2: &UpperHalfPoint,
    n_max: u32,
    tolerance: f64,
) -> Result<Option<ModularRelation>> {
    detect_modular_relation_bounded(z1, z2, n_max, tolerance, DEFAULT_MAX_LEVEL)
}

pub fn detect_modular_relation_bounded(
    z1: &UpperHalfPoint,
    z2: &UpperHalfPoint,
    n_max: u32,
    tolerance: f64,
    max_level: u32,
) -> Result<Option<ModularRelation>> {
    if n_max > max_level {
        return Err(Error::ResourceBound {
            what: "relation search level".into(),
            limit: max_level as u64,
            hint: "lower n_max or raise the configured level bound".into(),
        });
    }
    let prec = z1.prec().max(z2.prec()).max(128);
    let x0 = j_value(z1, 64)?;
    let y0 = j_value(z2, 64)?;
    for n in 1..=n_max {
        let phi = modular_polynomial_bounded(n, max_level)?;
        let r = phi_residual(&phi, z1, z2, prec)?;
        let scale = phi.log2_max_term(&x0, &y0).max(0.0);
        let relative = if r.is_zero() { 0.0 } else { (Float::with_val(64, r.log2_ref()).to_f64() - scale).exp2() };
        if relative < tolerance {
            return Ok(Some(ModularRelation { level: n, residual: r, relative_residual: relative, heuristic: true }));
        }
    }
    Ok(None)
}

/// Map from level to polynomial, for batch export.
pub fn modular_polynomials_up_to(n: u32) -> Result<BTreeMap<u32, Arc<ModularPolynomial>>> {
    (1..=n).map(|k| modular_polynomial(k).map(|p| (k, p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_values() {
        assert_eq!([1, 2, 3, 4, 5, 6, 8, 9, 10].map(psi), [1, 3, 4, 6, 6, 12, 12, 12, 18]);
    }

    #[test]
    fn level_two_matches_classical() {
        // oracle: the classical table of Phi_2
        let p = modular_polynomial(2).unwrap();
        let i = |v: i64| Integer::from(v);
        let expect = ModularPolynomial::from_terms(
            2,
            &[
                (3, 0, i(1)),
                (0, 3, i(1)),
                (2, 2, i(-1)),
                (2, 1, i(1488)),
                (1, 2, i(1488)),
                (2, 0, i(-162000)),
                (0, 2, i(-162000)),
                (1, 1, i(40773375)),
                (1, 0, i(8748000000)),
                (0, 1, i(8748000000)),
                (0, 0, i(-157464000000000)),
            ],
        );
        assert_eq!(p.terms(), expect.terms());
    }

    #[test]
    fn level_three_constant_term() {
        // oracle: Phi_3(X, 0) = X (X + 2^15 * 3 * 5^3)^3, from j = -12288000 at discriminant -27
        let p = modular_polynomial(3).unwrap();
        let c = Integer::from(32768 * 375);
        let lin = vec![c.clone(), Integer::from(1)];
        let expect = poly::shift(&poly::pow(&lin, 3), 1);
        let got: Vec<Integer> = (0..=4).map(|i| p.coeff(i, 0).clone()).collect();
        assert_eq!(poly::trim(got), expect);
    }

    #[test]
    fn symmetric_with_degree_psi() {
        for n in 2..=6 {
            let p = modular_polynomial(n).unwrap();
            assert!(p.is_symmetric());
            assert_eq!(p.degree_x() as u64, psi(n));
            assert_eq!(p.degree_y() as u64, psi(n));
            assert_eq!(*p.coeff(psi(n) as usize, 0), 1);
            assert!(!p.is_antisymmetric());
        }
        let one = modular_polynomial(1).unwrap();
        assert!(one.is_antisymmetric() && !one.is_symmetric());
    }

    #[test]
    fn json_round_trip() {
        let p = modular_polynomial(1).unwrap();
        let s = serde_json::to_string(&*p).unwrap();
        assert_eq!(s, r#"{"level":1,"terms":[[0,1,"-1"],[1,0,"1"]]}"#);
        let q: ModularPolynomial = serde_json::from_str(&serde_json::to_string(&*modular_polynomial(3).unwrap()).unwrap()).unwrap();
        assert_eq!(q, *modular_polynomial(3).unwrap());
    }

    #[test]
    fn vanishes_on_isogenous_pairs() {
        let z = UpperHalfPoint::from_f64(128, 0.137, 0.93).unwrap();
        for n in 1..=4 {
            let p = modular_polynomial(n).unwrap();
            let w = UpperHalfPoint::new(z.value().scale(&Float::with_val(128, n))).unwrap();
            assert!(phi_residual(&p, &z, &w, 128).unwrap() < 1e-20);
        }
    }

    #[test]
    fn level_bound_enforced() {
        assert!(matches!(modular_polynomial(11), Err(Error::ResourceBound { .. })));
        assert!(modular_polynomial(0).is_err());
    }

    #[test]
    fn relation_detection() {
        let z = UpperHalfPoint::from_f64(128, 0.21, 1.13).unwrap();
        let two_z = UpperHalfPoint::new(z.value().scale(&Float::with_val(128, 2))).unwrap();
        assert_eq!(detect_modular_relation(&z, &two_z, 4, 1e-8).unwrap().unwrap().level, 2);
        assert_eq!(detect_modular_relation(&z, &z, 4, 1e-8).unwrap().unwrap().level, 1);
        let w = UpperHalfPoint::from_f64(128, -0.31, 0.77).unwrap();
        assert!(detect_modular_relation(&z, &w, 4, 1e-8).unwrap().is_none());
    }

    #[test]
    fn character_sums() {
        // oracle: direct complex sum of zeta_d^{bn}
        for d in 1..12u64 {
            for g in divisors(d) {
                for n in -15i64..=15 {
                    let mut re = 0.0;
                    for b in 0..d {
                        if crate::algebraic::gcd_u64(b, g) == 1 {
                            re += (2.0 * std::f64::consts::PI * (b as f64) * (n as f64) / d as f64).cos();
                        }
                    }
                    assert!((re - coset_character_sum(g, d, n) as f64).abs() < 1e-9, "{g} {d} {n}");
                }
            }
        }
    }
}
