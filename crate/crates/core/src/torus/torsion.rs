//! Torsion points on curves in `G_m^2`, verified in cyclotomic fields.

use std::collections::BTreeSet;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::algebraic::gcd_u64;
use crate::error::{invalid, Error, Result};
use crate::linalg::lattice::{int_from_json, int_to_json};
use crate::numeric::IntExt;
use crate::poly::{self, Poly};

pub const DEFAULT_MAX_ORDER: u64 = 10_000;

/// A Laurent polynomial with integer coefficients in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    /// Sorted by exponent, no zero coefficients, no repeated exponents.
    terms: Vec<(Vec<i64>, Integer)>,
}

impl LaurentPoly {
    pub fn new(nvars: usize, terms: Vec<(Vec<i64>, Integer)>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::<Vec<i64>, Integer>::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return invalid(format!("exponent {e:?} has the wrong number of variables"));
            }
            *map.entry(e).or_default() += c;
        }
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { nvars, terms })
    }

    pub fn from_i64(nvars: usize, terms: &[(&[i64], i64)]) -> Result<Self> {
        Self::new(nvars, terms.iter().map(|(e, c)| (e.to_vec(), Integer::from(*c))).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<i64>, Integer)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    nvars: usize,
    terms: Vec<(Vec<i64>, serde_json::Value)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), int_to_json(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LaurentJson::deserialize(d)?;
        let terms = j
            .terms
            .iter()
            .map(|(e, c)| int_from_json(c).map(|c| (e.clone(), c)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        LaurentPoly::new(j.nvars, terms).map_err(D::Error::custom)
    }
}

/// `(zeta_m^{e_1}, ..., zeta_m^{e_k})` with `m` the exact order of the point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RootOfUnityPoint {
    pub order: u64,
    pub exponents: Vec<u64>,
    /// Each coordinate `x^{e_i} mod Phi_m`, coefficients low degree first.
    #[serde(serialize_with = "ser_polys")]
    pub field_rep: Vec<Poly>,
}

fn ser_polys<S: serde::Serializer>(p: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for q in p {
        let v: Vec<serde_json::Value> = q.iter().map(int_to_json).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}

impl RootOfUnityPoint {
    pub fn new(order: u64, exponents: Vec<u64>) -> Self {
        Self::with_cyclotomic(order, exponents, &poly::cyclotomic(order))
    }

    fn with_cyclotomic(order: u64, exponents: Vec<u64>, phi: &[Integer]) -> Self {
        let field_rep = exponents
            .iter()
            .map(|&e| poly::rem_monic(&poly::monomial(e as usize, Integer::from(1)), phi))
            .collect();
        RootOfUnityPoint { order, exponents, field_rep }
    }
}

/// The coset `{x^w = zeta_order^exponent}` of a one-dimensional subtorus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TorsionCoset {
    pub character: Vec<i64>,
    pub order: u64,
    pub exponent: u64,
}

impl TorsionCoset {
    pub fn contains(&self, p: &RootOfUnityPoint) -> bool {
        // zeta_m^{<w, e>} = zeta_M^k  iff  <w,e>/m - k/M is an integer
        let s: i128 = self.character.iter().zip(&p.exponents).map(|(w, e)| *w as i128 * *e as i128).sum();
        let lhs = Rational::from((Integer::from(s), Integer::from(p.order)));
        let rhs = Rational::from((Integer::from(self.exponent), Integer::from(self.order)));
        (lhs - rhs).is_integer()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionPointHit {
    #[serde(flatten)]
    pub point: RootOfUnityPoint,
    /// Index into `cosets` when the point lies on a positive-dimensional torsion coset.
    pub on_coset: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionSearch {
    pub max_order: u64,
    pub points: Vec<TorsionPointHit>,
    pub cosets: Vec<TorsionCoset>,
}

impl TorsionSearch {
    pub fn isolated(&self) -> impl Iterator<Item = &RootOfUnityPoint> {
        self.points.iter().filter(|h| h.on_coset.is_none()).map(|h| &h.point)
    }
}

/// Exact test `f(zeta_m^a, zeta_m^b) = 0` in `Z[x]/Phi_m`.
pub fn vanishes_at(f: &LaurentPoly, order: u64, exponents: &[u64]) -> bool {
    let m = order as i128;
    let mut acc = vec![Integer::new(); order as usize];
    for (e, c) in &f.terms {
        let k: i128 = e.iter().zip(exponents).map(|(x, y)| *x as i128 * *y as i128).sum();
        acc[k.rem_euclid(m) as usize] += c;
    }
    poly::rem_monic(&poly::trim(acc), &poly::cyclotomic(order)).is_empty()
}

/// All torsion points of exact order `<= max_order` on `f = 0` in `G_m^2`, plus the
/// one-dimensional torsion cosets contained in the curve.
pub fn torsion_points_on_curve(f: &LaurentPoly, max_order: u64) -> Result<TorsionSearch> {
    torsion_points_bounded(f, max_order, DEFAULT_MAX_ORDER)
}

pub fn torsion_points_bounded(f: &LaurentPoly, max_order: u64, limit: u64) -> Result<TorsionSearch> {
    if f.nvars != 2 {
        return invalid("torsion search expects a curve in two variables");
    }
    if f.is_zero() {
        return invalid("the zero polynomial does not define a curve");
    }
    if max_order > limit {
        return Err(Error::ResourceBound {
            what: "torsion order".into(),
            limit,
            hint: "lower --max-order".into(),
        });
    }
    let cosets = torsion_cosets(f)?;
    let per_order: Vec<Vec<RootOfUnityPoint>> =
        (1..=max_order).into_par_iter().map(|m| points_of_order(f, m)).collect();
    let mut points: Vec<TorsionPointHit> = per_order
        .into_iter()
        .flatten()
        .map(|p| {
            let on_coset = cosets.iter().position(|c| c.contains(&p));
            TorsionPointHit { point: p, on_coset }
        })
        .collect();
    points.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(TorsionSearch { max_order, points, cosets })
}

fn points_of_order(f: &LaurentPoly, m: u64) -> Vec<RootOfUnityPoint> {
    let table: Vec<(f64, f64)> = (0..m)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let terms: Vec<(i64, i64, f64)> = f.terms.iter().map(|(e, c)| (e[0], e[1], c.to_f64())).collect();
    let scale: f64 = terms.iter().map(|t| t.2.abs()).sum();
    let mi = m as i64;
    let units: Vec<u64> = (1..=m).filter(|&u| gcd_u64(u % m, m) == 1).map(|u| u % m).collect();
    let mut found = BTreeSet::new();
    // orbit representatives: first exponent a divisor of m (or 0)
    for a in crate::poly::divisors(m).into_iter().map(|d| d % m) {
        for b in 0..m {
            if gcd_u64(gcd_u64(a, b), m) != 1 {
                continue;
            }
            let (mut re, mut im) = (0.0, 0.0);
            for &(ex, ey, c) in &terms {
                let k = (ex * a as i64 + ey * b as i64).rem_euclid(mi) as usize;
                re += c * table[k].0;
                im += c * table[k].1;
            }
            if (re * re + im * im).sqrt() > 1e-6 * scale {
                continue;
            }
            if !vanishes_at(f, m, &[a, b]) {
                continue;
            }
            for &u in &units {
                found.insert((u * a % m, u * b % m));
            }
        }
    }
    let phi = poly::cyclotomic(m);
    found
        .into_iter()
        .map(|(a, b)| RootOfUnityPoint::with_cyclotomic(m, vec![a, b], &phi))
        .collect()
}

/// One-dimensional torsion cosets inside `f = 0`.
pub fn torsion_cosets(f: &LaurentPoly) -> Result<Vec<TorsionCoset>> {
    let exps: Vec<&Vec<i64>> = f.terms.iter().map(|(e, _)| e).collect();
    let mut dirs = BTreeSet::new();
    for i in 0..exps.len() {
        for j in i + 1..exps.len() {
            let (dx, dy) = (exps[j][0] - exps[i][0], exps[j][1] - exps[i][1]);
            // direction d perpendicular to the difference, primitive, canonical sign
            let g = gcd_u64(dx.unsigned_abs(), dy.unsigned_abs()) as i64;
            let (mut w1, mut w2) = (dx / g, dy / g);
            if w1 < 0 || (w1 == 0 && w2 < 0) {
                w1 = -w1;
                w2 = -w2;
            }
            dirs.insert((w1, w2));
        }
    }
    let mut out = Vec::new();
    for (w1, w2) in dirs {
        // direction d = (-w2, w1); terms with equal <e, d> form a group, and within
        // a group e = e0 + j w, so the group sum is a polynomial in s = x^w
        let d = (-w2, w1);
        let mut groups = std::collections::BTreeMap::<i64, Vec<(i64, Integer)>>::new();
        for (e, c) in &f.terms {
            let key = e[0] * d.0 + e[1] * d.1;
            // e.w moves in steps of |w|^2 within a group
            groups.entry(key).or_default().push((e[0] * w1 + e[1] * w2, c.clone()));
        }
        if groups.values().any(|g| g.len() < 2) {
            continue;
        }
        let mut g: Option<Poly> = None;
        for terms in groups.values() {
            let step = w1 * w1 + w2 * w2;
            let lo = terms.iter().map(|t| t.0).min().unwrap();
            let hi = terms.iter().map(|t| t.0).max().unwrap();
            let mut p = vec![Integer::new(); ((hi - lo) / step + 1) as usize];
            for (j, c) in terms {
                p[((j - lo) / step) as usize] += c;
            }
            let p = poly::trim(p);
            g = Some(match g {
                None => poly::primitive(&p),
                Some(h) => poly::gcd(&h, &p),
            });
        }
        let g = g.unwrap_or_default();
        if poly::degree(&g) < 1 {
            continue;
        }
        for (m, k) in cyclotomic_roots(&g) {
            out.push(TorsionCoset { character: vec![w1, w2], order: m, exponent: k });
        }
    }
    out.sort();
    Ok(out)
}

/// `(m, k)` for every root `zeta_m^k` of `g` (all `k` coprime to `m`).
fn cyclotomic_roots(g: &[Integer]) -> Vec<(u64, u64)> {
    let d = poly::degree(g) as u64;
    let mut out = Vec::new();
    let mut m = 1u64;
    // phi(m) >= sqrt(m/2), so phi(m) <= d forces m <= 2 d^2
    while m <= 2 * d * d + 2 {
        if poly::euler_phi(m) <= d && poly::div_exact(g, &poly::cyclotomic(m)).is_some() {
            for k in 0..m {
                if gcd_u64(k, m) == 1 {
                    out.push((m, k));
                }
            }
        }
        m += 1;
    }
    out
}
