//! Points of a parametrized curve in `G_m^n` lying in algebraic subgroups of codimension 2.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::coord::{coprime_base, exponents_over};
use super::subvariety::SubgroupSpec;
use crate::algebraic::{weil_height_prec, AlgebraicNumber};
use crate::error::{invalid, Error, Result};
use crate::linalg::lattice::{integer_kernel, IntegerLattice};
use crate::linalg::IntMatrix;
use crate::numeric::{self, Complex, DEFAULT_PRECISION};
use crate::poly::{self, Poly};

/// `sum_j c_j t^j` with rational coefficients and integer (possibly negative) exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLaurent {
    pub terms: Vec<(i64, Rational)>,
}

impl RationalLaurent {
    pub fn new(terms: Vec<(i64, Rational)>) -> Self {
        let mut map = BTreeMap::<i64, Rational>::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c;
        }
        RationalLaurent { terms: map.into_iter().filter(|(_, c)| *c != 0).collect() }
    }

    pub fn from_i64(terms: &[(i64, i64)]) -> Self {
        Self::new(terms.iter().map(|&(e, c)| (e, Rational::from(c))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == 0)
    }

    pub fn eval(&self, t: &Complex) -> Complex {
        let p = t.prec();
        self.terms.iter().fold(Complex::zero(p), |acc, (e, c)| {
            acc + t.powi(*e).scale(&Float::with_val(p, c))
        })
    }

    /// `kappa * t^v * P(t)` with `P` primitive, `P(0) != 0`, positive leading coefficient.
    fn normalize(&self) -> Normalized {
        let v = self.terms[0].0;
        let den = self.terms.iter().fold(Integer::from(1), |acc, (_, c)| acc.lcm(c.denom()));
        let top = self.terms.last().unwrap().0;
        let mut raw = vec![Integer::new(); (top - v + 1) as usize];
        for (e, c) in &self.terms {
            raw[(e - v) as usize] = Rational::from(c * &den).numer().clone();
        }
        let prim = poly::primitive(&raw);
        let kappa = Rational::from((raw.last().unwrap().clone(), den)) / Rational::from(prim.last().unwrap());
        Normalized { kappa, v, p: prim }
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    terms: Vec<(i64, String)>,
}

impl Serialize for RationalLaurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson { terms: self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LaurentJson::deserialize(d)?;
        let terms = j
            .terms
            .iter()
            .map(|(e, c)| numeric::parse_rational(c).map(|q| (*e, q)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(RationalLaurent::new(terms))
    }
}

#[derive(Clone, Debug)]
struct Normalized {
    kappa: Rational,
    v: i64,
    p: Poly,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnlikelyHit {
    pub t: AlgebraicNumber,
    pub point: Vec<AlgebraicNumber>,
    pub subgroup: SubgroupSpec,
    /// The exponent vectors (within the search bound) with `x(t)^a = 1`.
    pub relation_vectors: Vec<Vec<i64>>,
    pub t_height: f64,
    pub coordinate_heights: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnlikelySearch {
    pub exponent_bound: u32,
    pub t_height_bound: u64,
    pub vectors_tried: usize,
    pub pairs_tried: usize,
    pub hits: Vec<UnlikelyHit>,
}

/// Relations `a` with `x^a` a root of unity identically on the curve.
pub fn identical_relations(curve: &[RationalLaurent]) -> Result<IntegerLattice> {
    let n = curve.len();
    if let Some(i) = curve.iter().position(|c| c.is_zero()) {
        return Err(Error::Degenerate(format!("coordinate {i} is identically zero")));
    }
    let norm: Vec<Normalized> = curve.iter().map(|c| c.normalize()).collect();
    // gcd-free basis of the nonconstant polynomial parts
    let base = poly_coprime_base(&norm.iter().map(|x| x.p.clone()).collect::<Vec<_>>());
    let mut rows: IntMatrix = Vec::new();
    rows.push(norm.iter().map(|x| Integer::from(x.v)).collect());
    let exps: Vec<Vec<Integer>> = norm.iter().map(|x| poly_exponents(&base, &x.p)).collect();
    for k in 0..base.len() {
        rows.push(exps.iter().map(|e| e[k].clone()).collect());
    }
    // |kappa|^a = 1 as well
    let mut ints = Vec::new();
    for x in &norm {
        ints.push(x.kappa.numer().clone());
        ints.push(x.kappa.denom().clone());
    }
    let ib = coprime_base(&ints);
    let kexp: Vec<Vec<Integer>> = norm.iter().map(|x| exponents_over(&ib, &x.kappa.clone().abs())).collect();
    for k in 0..ib.len() {
        rows.push(kexp.iter().map(|e| e[k].clone()).collect());
    }
    Ok(integer_kernel(&rows, n))
}

fn poly_coprime_base(ps: &[Poly]) -> Vec<Poly> {
    let mut base: Vec<Poly> = ps.iter().filter(|p| poly::degree(p) >= 1).map(|p| poly::primitive(p)).collect();
    loop {
        base.sort();
        base.dedup();
        let mut changed = false;
        'scan: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = poly::gcd(&base[i], &base[j]);
                if poly::degree(&g) >= 1 {
                    let a = poly::div_exact(&base[i], &g).unwrap();
                    let b = poly::div_exact(&base[j], &g).unwrap();
                    let mut next: Vec<Poly> =
                        base.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| v.clone()).collect();
                    next.extend([a, b, g].into_iter().map(|p| poly::primitive(&p)).filter(|p| poly::degree(p) >= 1));
                    base = next;
                    changed = true;
                    break 'scan;
                }
            }
        }
        if !changed {
            return base;
        }
    }
}

fn poly_exponents(base: &[Poly], p: &[Integer]) -> Vec<Integer> {
    let mut rest = poly::primitive(p);
    base.iter()
        .map(|b| {
            let mut e = 0;
            while let Some(q) = poly::div_exact(&rest, b) {
                rest = q;
                e += 1;
            }
            Integer::from(e)
        })
        .collect()
}

/// Numerator of `x^a - 1` (cleared of denominators and powers of `t`).
fn relation_poly(norm: &[Normalized], a: &[i64]) -> Poly {
    let mut num = vec![Integer::from(1)];
    let mut den = vec![Integer::from(1)];
    let mut kappa = Rational::from(1);
    let mut tpow = 0i64;
    for (x, &ai) in norm.iter().zip(a) {
        if ai == 0 {
            continue;
        }
        use rug::ops::Pow;
        kappa *= x.kappa.clone().pow(ai as i32);
        tpow += x.v * ai;
        if ai > 0 {
            num = poly::mul(&num, &poly::pow(&x.p, ai as u32));
        } else {
            den = poly::mul(&den, &poly::pow(&x.p, (-ai) as u32));
        }
    }
    let (kn, kd) = (kappa.numer().clone(), kappa.denom().clone());
    let mut lhs = poly::scale(&num, &kn);
    let mut rhs = poly::scale(&den, &kd);
    if tpow >= 0 {
        lhs = poly::shift(&lhs, tpow as usize);
    } else {
        rhs = poly::shift(&rhs, (-tpow) as usize);
    }
    poly::primitive(&poly::sub(&lhs, &rhs))
}

const P61: u64 = (1 << 61) - 1;

fn modp(p: &[Integer]) -> Vec<u64> {
    let m = Integer::from(P61);
    let mut v: Vec<u64> = p
        .iter()
        .map(|c| c.clone().div_rem_euc(m.clone()).1.to_u64().unwrap_or(0))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P61 as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn gcd_degree_modp(a: &[u64], b: &[u64]) -> usize {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        // x mod y
        let inv = powmod(*y.last().unwrap(), P61 - 2);
        while x.len() >= y.len() {
            let c = mulmod(*x.last().unwrap(), inv);
            let k = x.len() - y.len();
            for (i, yc) in y.iter().enumerate() {
                x[i + k] = (x[i + k] + P61 - mulmod(c, *yc)) % P61;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len().saturating_sub(1)
}

fn primitive_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        let first = v.iter().find(|&&x| x != 0);
        if let Some(&f) = first {
            let g = v.iter().fold(0u64, |g, &x| crate::algebraic::gcd_u64(g, x.unsigned_abs()));
            if f > 0 && g == 1 {
                out.push(v.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if v[i] < bound {
                v[i] += 1;
                break;
            }
            v[i] = -bound;
            i += 1;
        }
    }
}

/// Searches pairs of exponent vectors with sup-norm `<= exponent_bound` for parameters `t`
/// (algebraic, multiplicative height `<= t_height_bound`) with `x(t)^a = x(t)^b = 1`.
pub fn unlikely_search(
    curve: &[RationalLaurent],
    exponent_bound: u32,
    t_height_bound: u64,
) -> Result<UnlikelySearch> {
    let n = curve.len();
    if n < 3 {
        return invalid("unlikely search needs at least three coordinates");
    }
    if curve.iter().all(|c| c.is_constant()) {
        return invalid("all coordinates are constant");
    }
    let rel = identical_relations(curve)?;
    if !rel.is_zero() {
        let a: Vec<String> = rel.basis()[0].iter().map(|x| x.to_string()).collect();
        return Err(Error::Degenerate(format!(
            "curve lies in a proper algebraic subgroup: x^({}) is a root of unity identically",
            a.join(", ")
        )));
    }
    let norm: Vec<Normalized> = curve.iter().map(|c| c.normalize()).collect();
    let vectors = primitive_vectors(n, exponent_bound as i64);
    let polys: Vec<(Poly, Vec<u64>)> = vectors
        .par_iter()
        .map(|a| {
            let f = relation_poly(&norm, a);
            let m = modp(&f);
            (f, m)
        })
        .collect();
    // the parameter must avoid t = 0 and zeros of the coordinates
    let bad: Vec<Poly> = std::iter::once(poly::from_i64(&[0, 1]))
        .chain(norm.iter().map(|x| x.p.clone()).filter(|p| poly::degree(p) >= 1))
        .collect();
    let nv = vectors.len();
    let candidates: BTreeSet<Poly> = (0..nv)
        .into_par_iter()
        .flat_map_iter(|i| {
            let polys = &polys;
            let bad = &bad;
            (i + 1..nv).filter_map(move |j| {
                let (fa, ma) = &polys[i];
                let (fb, mb) = &polys[j];
                let exact_needed = ma.len() != fa.len() && mb.len() != fb.len();
                if !exact_needed && gcd_degree_modp(ma, mb) == 0 {
                    return None;
                }
                let mut g = poly::gcd(fa, fb);
                for b in bad {
                    loop {
                        let h = poly::gcd(&g, b);
                        if poly::degree(&h) < 1 {
                            break;
                        }
                        g = poly::div_exact(&g, &h).unwrap();
                    }
                }
                (poly::degree(&g) >= 1).then(|| poly::primitive(&g))
            })
        })
        .collect();
    let pairs_tried = nv * (nv.saturating_sub(1)) / 2;

    let mut factors = BTreeSet::new();
    for g in &candidates {
        for f in poly::factor_squarefree(&poly::squarefree(g))? {
            factors.insert(f);
        }
    }
    let ln_bound = Float::with_val(DEFAULT_PRECISION, t_height_bound).ln();
    let mut hits = Vec::new();
    for m in factors {
        let probe = AlgebraicNumber::new(m.clone(), &Complex::zero(DEFAULT_PRECISION))?;
        let h = weil_height_prec(&probe, DEFAULT_PRECISION);
        if h > Float::with_val(DEFAULT_PRECISION, &ln_bound + 1e-20) {
            continue;
        }
        let rel_vecs: Vec<Vec<i64>> = vectors
            .iter()
            .zip(&polys)
            .filter(|(_, (f, _))| poly::div_exact(f, &m).is_some())
            .map(|(a, _)| a.clone())
            .collect();
        let lattice = IntegerLattice::new(
            n,
            rel_vecs.iter().map(|a| a.iter().map(|&x| Integer::from(x)).collect()).collect(),
        )?;
        if lattice.rank() < 2 {
            continue;
        }
        for root in poly::complex_roots(&m, DEFAULT_PRECISION)? {
            let t = AlgebraicNumber::new(m.clone(), &root)?;
            let point = curve
                .iter()
                .zip(&norm)
                .map(|(c, x)| coordinate_value(c, x, &t))
                .collect::<Result<Vec<_>>>()?;
            let coordinate_heights = point.iter().map(|p| p.weil_height().to_f64()).collect();
            hits.push(UnlikelyHit {
                t,
                point,
                subgroup: SubgroupSpec { relations: lattice.clone() },
                relation_vectors: rel_vecs.clone(),
                t_height: h.to_f64(),
                coordinate_heights,
            });
        }
    }
    hits.sort_by(|a, b| {
        a.t.min_poly().cmp(b.t.min_poly()).then_with(|| {
            let (za, zb) = (a.t.approx(), b.t.approx());
            za.re.partial_cmp(&zb.re).unwrap().then(za.im.partial_cmp(&zb.im).unwrap())
        })
    });
    Ok(UnlikelySearch {
        exponent_bound,
        t_height_bound,
        vectors_tried: nv,
        pairs_tried,
        hits,
    })
}

/// Exact check that `x(t)^a = 1` in `Q[t]/(m)`, for `m` the minimal polynomial of `t`.
///
/// Writes each coordinate as `t^v P(t) / d` with `P` integral and compares the two sides
/// of the cleared identity by pseudo-division.
pub fn satisfies_relation(curve: &[RationalLaurent], m: &[Integer], a: &[i64]) -> bool {
    let one = vec![Integer::from(1)];
    let (mut lhs, mut rhs) = (one.clone(), one);
    let mut tpow = 0i64;
    for (c, &ai) in curve.iter().zip(a) {
        if ai == 0 {
            continue;
        }
        let Some(v) = c.terms.first().map(|t| t.0) else { return false };
        let d = c.terms.iter().fold(Integer::from(1), |acc, (_, q)| acc.lcm(q.denom()));
        let top = c.terms.last().map(|t| t.0).unwrap_or(v);
        let mut p = vec![Integer::new(); (top - v + 1) as usize];
        for (e, q) in &c.terms {
            p[(e - v) as usize] = Rational::from(q * &d).into_numer_denom().0;
        }
        let k = ai.unsigned_abs() as u32;
        let (pk, dk) = (poly::pow(&p, k), vec![Integer::from(rug::ops::Pow::pow(&d, k))]);
        if ai > 0 {
            lhs = poly::mul(&lhs, &pk);
            rhs = poly::mul(&rhs, &dk);
        } else {
            lhs = poly::mul(&lhs, &dk);
            rhs = poly::mul(&rhs, &pk);
        }
        tpow += v * ai;
    }
    if tpow >= 0 {
        lhs = poly::shift(&lhs, tpow as usize);
    } else {
        rhs = poly::shift(&rhs, (-tpow) as usize);
    }
    poly::is_zero(&poly::pseudo_rem(&poly::sub(&lhs, &rhs), m))
}

/// The algebraic number `x(t)`, via `Res_t(m(t), B(t) y - A(t))`.
fn coordinate_value(c: &RationalLaurent, x: &Normalized, t: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    let approx = c.eval(&t.value(DEFAULT_PRECISION));
    if let Some(q) = t.as_rational() {
        let v = c.terms.iter().fold(Rational::new(), |acc, (e, k)| {
            use rug::ops::Pow;
            acc + (k * q.clone().pow(*e as i32))
        });
        return Ok(AlgebraicNumber::from_rational(&v));
    }
    // y = kappa t^v P(t) = A(t) / B(t)
    let (kn, kd) = (x.kappa.numer().clone(), x.kappa.denom().clone());
    let (a, b) = if x.v >= 0 {
        (poly::shift(&poly::scale(&x.p, &kn), x.v as usize), vec![kd])
    } else {
        (poly::scale(&x.p, &kn), poly::shift(&[kd], (-x.v) as usize))
    };
    let m = t.min_poly();
    let d = t.degree();
    // resultant is a polynomial of degree <= d in y; interpolate at y = 0..=d
    let samples: Vec<(Integer, Integer)> = (0..=d as i64)
        .map(|y| {
            let yb = poly::scale(&b, &Integer::from(y));
            (Integer::from(y), poly::resultant(m, &poly::sub(&yb, &a)))
        })
        .collect();
    let r = interpolate(&samples);
    let minpoly = poly::squarefree(&r);
    AlgebraicNumber::root_of(&minpoly, &approx)
}

/// Lagrange interpolation; the result is known to have integer coefficients up to scaling.
fn interpolate(points: &[(Integer, Integer)]) -> Poly {
    let n = points.len();
    let mut acc: Vec<Rational> = vec![Rational::new(); n];
    for i in 0..n {
        let mut basis: Vec<Rational> = vec![Rational::from(1)];
        let mut denom = Rational::from(1);
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::new(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= Rational::from(c * &points[j].0);
            }
            basis = next;
            denom *= Rational::from(&points[i].0 - &points[j].0);
        }
        let w = Rational::from(&points[i].1 / &denom);
        for (k, c) in basis.iter().enumerate() {
            acc[k] += Rational::from(c * &w);
        }
    }
    let l = acc.iter().fold(Integer::from(1), |g, c| g.lcm(c.denom()));
    poly::trim(acc.iter().map(|c| Rational::from(c * &l).numer().clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_one_minus_t(c: i64) -> Vec<RationalLaurent> {
        vec![
            RationalLaurent::from_i64(&[(1, 1)]),
            RationalLaurent::from_i64(&[(0, 1), (1, -1)]),
            RationalLaurent::from_i64(&[(0, c)]),
        ]
    }

    #[test]
    fn finds_sixth_roots_of_unity() {
        let r = unlikely_search(&t_one_minus_t(2), 5, 1).unwrap();
        let z6 = AlgebraicNumber::root_of_unity(6, 1).unwrap();
        let z65 = AlgebraicNumber::root_of_unity(6, 5).unwrap();
        assert!(r.hits.iter().any(|h| h.t == z6));
        assert!(r.hits.iter().any(|h| h.t == z65));
        for h in &r.hits {
            assert!(h.subgroup.relations.rank() >= 2);
            assert!(h.relation_vectors.iter().all(|a| satisfies_relation(&t_one_minus_t(2), h.t.min_poly(), a)));
        }
        assert!(!satisfies_relation(&t_one_minus_t(2), z6.min_poly(), &[1, 0, 0]));
    }

    #[test]
    fn subgroup_curve_refused() {
        // (t, t^2, t+1): x1^2 / x2 = 1 identically
        let c = vec![
            RationalLaurent::from_i64(&[(1, 1)]),
            RationalLaurent::from_i64(&[(2, 1)]),
            RationalLaurent::from_i64(&[(0, 1), (1, 1)]),
        ];
        assert!(matches!(unlikely_search(&c, 2, 2), Err(Error::Degenerate(_))));
        // constant coordinate that is a root of unity
        assert!(matches!(unlikely_search(&t_one_minus_t(-1), 2, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn rational_coordinates() {
        let c = vec![
            RationalLaurent::from_i64(&[(1, 1)]),
            RationalLaurent::from_i64(&[(0, 1), (1, 1)]),
            RationalLaurent::from_i64(&[(0, 2), (1, 1)]),
        ];
        let r = unlikely_search(&c, 2, 4).unwrap();
        assert!(r.hits.iter().any(|h| h.t.degree() == 2 && h.relation_vectors.contains(&vec![1, 1, 0])));
        for h in &r.hits {
            let tv = h.t.value(256);
            for a in &h.relation_vectors {
                let v = c.iter().zip(a).fold(Complex::one(256), |acc, (ci, ai)| &acc * &ci.eval(&tv).powi(*ai));
                assert!((&v - &Complex::one(256)).abs_f64() < 1e-50);
                assert!(satisfies_relation(&c, h.t.min_poly(), a));
            }
        }
    }
}
