//! Special subvarieties of `Y(1)^n`, their complexity, and the Moebius fibers in `H^n`.
//!
//! Coordinates are indexed from 0. A strict partition is `(R_0, R_1, ..., R_k)` where only
//! `R_0` (the fixed coordinates) may be empty; within a part the smallest index is the
//! free coordinate `z` and every other index `m` carries a matrix with `z_m = g_m z`.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::upper_half::{Mat2, UpperHalfPoint};
use crate::error::{invalid, Result};
use crate::numeric::Complex;

/// Root in `H` of the primitive form `a Z^2 + b Z + c` with `a > 0` and negative discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuadraticJson", into = "QuadraticJson")]
pub struct QuadraticPoint {
    a: Integer,
    b: Integer,
    c: Integer,
}

#[derive(Clone, Serialize, Deserialize)]
struct QuadraticJson {
    a: i64,
    b: i64,
    c: i64,
}

impl TryFrom<QuadraticJson> for QuadraticPoint {
    type Error = crate::Error;
    fn try_from(j: QuadraticJson) -> Result<Self> {
        QuadraticPoint::new(j.a, j.b, j.c)
    }
}

impl From<QuadraticPoint> for QuadraticJson {
    fn from(q: QuadraticPoint) -> Self {
        QuadraticJson {
            a: q.a.to_i64().expect("coefficients fit in i64"),
            b: q.b.to_i64().expect("coefficients fit in i64"),
            c: q.c.to_i64().expect("coefficients fit in i64"),
        }
    }
}

impl QuadraticPoint {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 {
            return invalid("leading coefficient must be positive");
        }
        let g = crate::algebraic::gcd_u64(crate::algebraic::gcd_u64(a as u64, b.unsigned_abs()), c.unsigned_abs());
        if g != 1 {
            return invalid(format!("{a}Z^2 + {b}Z + {c} is not primitive"));
        }
        let q = QuadraticPoint { a: a.into(), b: b.into(), c: c.into() };
        if q.discriminant() >= 0 {
            return invalid("discriminant must be negative for a point of H");
        }
        Ok(q)
    }

    pub fn coefficients(&self) -> [&Integer; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `b^2 - 4ac`
    pub fn discriminant(&self) -> Integer {
        Integer::from(&self.b * &self.b) - Integer::from(&self.a * &self.c) * 4u32
    }

    pub fn root(&self, prec: u32) -> UpperHalfPoint {
        let two_a = Float::with_val(prec, Integer::from(&self.a * 2u32));
        let re = Float::with_val(prec, Integer::from(-&self.b)) / &two_a;
        let im = Float::with_val(prec, -self.discriminant()).sqrt() / &two_a;
        UpperHalfPoint::new(Complex::new(re, im)).expect("negative discriminant")
    }

    /// The 2-height: any integer polynomial of degree at most 2 vanishing at the root
    /// is an integer multiple of the primitive minimal form.
    pub fn height(&self) -> Integer {
        self.coefficients().into_iter().map(|x| x.clone().abs()).max().expect("three entries")
    }
}

pub fn discriminant(q: &QuadraticPoint) -> Integer {
    q.discriminant()
}

/// Element of `GL_2^+(Q)` scaled to coprime integer entries; `n_of_g` is its determinant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct RationalScalingMatrix {
    entries: Mat2,
}

impl TryFrom<Mat2> for RationalScalingMatrix {
    type Error = crate::Error;
    fn try_from(m: Mat2) -> Result<Self> {
        RationalScalingMatrix::from_integer(m)
    }
}

impl From<RationalScalingMatrix> for Mat2 {
    fn from(r: RationalScalingMatrix) -> Self {
        r.entries
    }
}

impl RationalScalingMatrix {
    pub fn from_integer(m: Mat2) -> Result<Self> {
        if m.det() <= 0 {
            return invalid(format!("{m} does not have positive determinant"));
        }
        let g = m.content();
        let e = |x: &Integer| Integer::from(x.div_exact_ref(&g));
        Ok(RationalScalingMatrix { entries: Mat2 { a: e(&m.a), b: e(&m.b), c: e(&m.c), d: e(&m.d) } })
    }

    pub fn from_rationals(entries: [Rational; 4]) -> Result<Self> {
        let l = entries.iter().fold(Integer::from(1), |acc, q| acc.lcm(q.denom()));
        let i = |q: &Rational| Rational::from(q * &l).numer().clone();
        Self::from_integer(Mat2 { a: i(&entries[0]), b: i(&entries[1]), c: i(&entries[2]), d: i(&entries[3]) })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::from_integer(Mat2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        RationalScalingMatrix { entries: Mat2::identity() }
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn n_of_g(&self) -> Integer {
        self.entries.det()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecialJson", into = "SpecialJson")]
pub struct SpecialSubvarietyModular {
    n: usize,
    partition: Vec<Vec<usize>>,
    fixed_points: Vec<QuadraticPoint>,
    matrices: Vec<Vec<RationalScalingMatrix>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct SpecialJson {
    n: usize,
    partition: Vec<Vec<usize>>,
    fixed_points: Vec<QuadraticPoint>,
    matrices: Vec<Vec<RationalScalingMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complexity: Option<String>,
}

impl TryFrom<SpecialJson> for SpecialSubvarietyModular {
    type Error = crate::Error;
    fn try_from(j: SpecialJson) -> Result<Self> {
        let s = SpecialSubvarietyModular::new(j.n, j.partition, j.fixed_points, j.matrices)?;
        if let Some(c) = j.complexity {
            if c != s.complexity().to_string() {
                return invalid(format!("stated complexity {c} differs from computed {}", s.complexity()));
            }
        }
        Ok(s)
    }
}

impl From<SpecialSubvarietyModular> for SpecialJson {
    fn from(s: SpecialSubvarietyModular) -> Self {
        let complexity = Some(s.complexity().to_string());
        SpecialJson { n: s.n, partition: s.partition, fixed_points: s.fixed_points, matrices: s.matrices, complexity }
    }
}

/// Checks a strict partition of `0..n` and returns it with every part sorted.
pub fn check_partition(n: usize, partition: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if partition.is_empty() {
        return invalid("partition needs at least the (possibly empty) fixed part");
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for (i, part) in partition.iter().enumerate() {
        if i > 0 && part.is_empty() {
            return invalid(format!("part {i} is empty; only the fixed part may be"));
        }
        let mut p = part.clone();
        p.sort_unstable();
        for &x in &p {
            if x >= n || seen[x] {
                return invalid(format!("index {x} is out of range or repeated"));
            }
            seen[x] = true;
        }
        out.push(p);
    }
    if seen.iter().any(|s| !s) {
        return invalid("partition does not cover every coordinate");
    }
    Ok(out)
}

impl SpecialSubvarietyModular {
    pub fn new(
        n: usize,
        partition: Vec<Vec<usize>>,
        fixed_points: Vec<QuadraticPoint>,
        matrices: Vec<Vec<RationalScalingMatrix>>,
    ) -> Result<Self> {
        let partition = check_partition(n, &partition)?;
        if fixed_points.len() != partition[0].len() {
            return invalid("need one quadratic point per fixed coordinate");
        }
        if matrices.len() != partition.len() - 1 {
            return invalid("need one matrix list per non-fixed part");
        }
        for (part, ms) in partition[1..].iter().zip(&matrices) {
            if ms.len() != part.len() - 1 {
                return invalid("need one matrix per non-leading index of each part");
            }
        }
        Ok(SpecialSubvarietyModular { n, partition, fixed_points, matrices })
    }

    /// The image of `z -> (z, g_2 z, ..., g_n z)`.
    pub fn strongly_special_curve(matrices: Vec<RationalScalingMatrix>) -> Result<Self> {
        let n = matrices.len() + 1;
        Self::new(n, vec![vec![], (0..n).collect()], vec![], vec![matrices])
    }

    pub fn special_point(points: Vec<QuadraticPoint>) -> Result<Self> {
        let n = points.len();
        Self::new(n, vec![(0..n).collect()], points, vec![])
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.partition.len() - 1
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn fixed_points(&self) -> &[QuadraticPoint] {
        &self.fixed_points
    }

    pub fn matrices(&self) -> &[Vec<RationalScalingMatrix>] {
        &self.matrices
    }

    pub fn complexity(&self) -> Integer {
        complexity(self)
    }

    /// The fiber in `H^n` with the same data, as a Moebius subvariety.
    pub fn fiber(&self, prec: u32) -> MobiusFiber {
        let fixed = self.fixed_points.iter().map(|q| q.root(prec)).collect();
        let mats = self
            .matrices
            .iter()
            .map(|ms| ms.iter().map(|m| RealMat2::from_integer(prec, m.entries())).collect())
            .collect();
        mobius_fiber(&self.partition, mats, fixed).expect("validated data")
    }
}

/// `max(|Delta(z)|, N(g))` over fixed points and matrices, and 1 when there are none.
pub fn complexity(s: &SpecialSubvarietyModular) -> Integer {
    let d = s.fixed_points.iter().map(|q| q.discriminant().abs());
    let g = s.matrices.iter().flatten().map(|m| m.n_of_g());
    d.chain(g).fold(Integer::from(1), |acc, x| acc.max(x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealMat2 {
    pub entries: [Float; 4],
}

impl RealMat2 {
    pub fn new(entries: [Float; 4]) -> Self {
        RealMat2 { entries }
    }

    pub fn from_f64(prec: u32, e: [f64; 4]) -> Self {
        RealMat2 { entries: e.map(|x| Float::with_val(prec, x)) }
    }

    pub fn from_integer(prec: u32, m: &Mat2) -> Self {
        RealMat2 { entries: m.entries().map(|x| Float::with_val(prec, x)) }
    }

    pub fn det(&self) -> Float {
        let [a, b, c, d] = &self.entries;
        Float::with_val(a.prec(), a * d) - Float::with_val(a.prec(), b * c)
    }

    pub fn act(&self, z: &Complex) -> Complex {
        let [a, b, c, d] = &self.entries;
        let num = &z.scale(a) + &Complex::from_real(b.clone());
        let den = &z.scale(c) + &Complex::from_real(d.clone());
        &num / &den
    }
}

/// The fiber `M^R_t`: fixed coordinates plus one copy of `H` per non-fixed part.
#[derive(Clone, Debug)]
pub struct MobiusFiber {
    partition: Vec<Vec<usize>>,
    matrices: Vec<Vec<RealMat2>>,
    fixed: Vec<UpperHalfPoint>,
}

pub fn mobius_fiber(
    partition: &[Vec<usize>],
    matrices: Vec<Vec<RealMat2>>,
    fixed: Vec<UpperHalfPoint>,
) -> Result<MobiusFiber> {
    let n = partition.iter().map(|p| p.len()).sum();
    let partition = check_partition(n, partition)?;
    if fixed.len() != partition[0].len() || matrices.len() + 1 != partition.len() {
        return invalid("parameter counts do not match the partition");
    }
    for (part, ms) in partition[1..].iter().zip(&matrices) {
        if ms.len() + 1 != part.len() {
            return invalid("need one matrix per non-leading index of each part");
        }
        if ms.iter().any(|m| m.det() <= 0) {
            return invalid("Moebius parameters must have positive determinant");
        }
    }
    Ok(MobiusFiber { partition, matrices, fixed })
}

impl MobiusFiber {
    pub fn dim(&self) -> usize {
        self.partition.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.partition.iter().map(|p| p.len()).sum()
    }

    /// The point of the fiber with free coordinates `free` (one per non-fixed part).
    pub fn point_at(&self, free: &[UpperHalfPoint]) -> Result<Vec<UpperHalfPoint>> {
        if free.len() != self.dim() {
            return invalid(format!("expected {} free coordinates", self.dim()));
        }
        let mut out: Vec<Option<UpperHalfPoint>> = vec![None; self.ambient_dim()];
        for (idx, z) in self.partition[0].iter().zip(&self.fixed) {
            out[*idx] = Some(z.clone());
        }
        for ((part, ms), z) in self.partition[1..].iter().zip(&self.matrices).zip(free) {
            out[part[0]] = Some(z.clone());
            for (idx, m) in part[1..].iter().zip(ms) {
                out[*idx] = Some(UpperHalfPoint::new(m.act(z.value()))?);
            }
        }
        Ok(out.into_iter().map(|p| p.expect("partition covers all")).collect())
    }

    /// Whether `point` satisfies the defining equations within `tol` (absolute).
    pub fn contains(&self, point: &[UpperHalfPoint], tol: f64) -> bool {
        if point.len() != self.ambient_dim() {
            return false;
        }
        let close = |a: &Complex, b: &Complex| (a - b).abs_f64() <= tol;
        let fixed_ok = self.partition[0].iter().zip(&self.fixed).all(|(i, z)| close(point[*i].value(), z.value()));
        fixed_ok
            && self.partition[1..].iter().zip(&self.matrices).all(|(part, ms)| {
                let z = point[part[0]].value();
                part[1..].iter().zip(ms).all(|(i, m)| close(point[*i].value(), &m.act(z)))
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParameterHeight {
    /// 2-heights of the fixed quadratic points, then of every matrix entry.
    pub heights: Vec<String>,
    pub height: String,
    pub complexity: String,
}

/// The special parameter `t` (primitive integer matrices, quadratic fixed points) and its
/// 2-height vector; `height` is the maximum entry.
pub fn special_point_parameter_height(s: &SpecialSubvarietyModular) -> ParameterHeight {
    let mut hs: Vec<Integer> = s.fixed_points.iter().map(|q| q.height()).collect();
    for m in s.matrices.iter().flatten() {
        // H_2 of an integer is its absolute value, and 1 for 0 (root of X)
        hs.extend(m.entries().entries().iter().map(|x| Integer::from(x.abs_ref()).max(Integer::from(1))));
    }
    let h = hs.iter().cloned().fold(Integer::from(1), |a, b| a.max(b));
    ParameterHeight {
        heights: hs.iter().map(|x| x.to_string()).collect(),
        height: h.to_string(),
        complexity: s.complexity().to_string(),
    }
}

/// Reduced primitive positive definite forms with `|disc| <= bound`.
pub fn reduced_quadratic_points(bound: u64) -> Vec<QuadraticPoint> {
    let mut out = Vec::new();
    let b = bound as i64;
    for a in 1..=b {
        for bb in -a..=a {
            for c in a..=b {
                let disc = bb * bb - 4 * a * c;
                if -disc > b {
                    break;
                }
                if (bb < 0 && (bb.abs() == a || a == c)) || disc >= 0 {
                    continue;
                }
                if let Ok(q) = QuadraticPoint::new(a, bb, c) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// Primitive upper-triangular Hermite representatives `[[a, b], [0, d]]`, `ad = N`, `0 <= b < d`.
pub fn hermite_matrices(det: u64) -> Vec<RationalScalingMatrix> {
    let mut out = Vec::new();
    for a in crate::poly::divisors(det) {
        let d = det / a;
        for b in 0..d {
            let m = Mat2::new(a, b, 0, d);
            if m.content() == 1 {
                out.push(RationalScalingMatrix { entries: m });
            }
        }
    }
    out
}

/// Special subvarieties of `Y(1)^2` of complexity at most `bound`, up to the action of
/// `SL_2(Z)` on each fixed coordinate and on the left of each matrix.
pub fn small_specials_in_y1_squared(bound: u64) -> Vec<SpecialSubvarietyModular> {
    let pts = reduced_quadratic_points(bound);
    let mut out = Vec::new();
    for p in &pts {
        for q in &pts {
            out.push(SpecialSubvarietyModular::special_point(vec![p.clone(), q.clone()]).unwrap());
        }
        for free in [0usize, 1] {
            let fixed = 1 - free;
            out.push(SpecialSubvarietyModular::new(2, vec![vec![fixed], vec![free]], vec![p.clone()], vec![vec![]]).unwrap());
        }
    }
    for det in 1..=bound {
        for g in hermite_matrices(det) {
            out.push(SpecialSubvarietyModular::strongly_special_curve(vec![g]).unwrap());
        }
    }
    out.push(SpecialSubvarietyModular::new(2, vec![vec![], vec![0], vec![1]], vec![], vec![vec![], vec![]]).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(QuadraticPoint::new(1, 0, 1).unwrap().discriminant(), -4);
        assert_eq!(QuadraticPoint::new(1, -1, 1).unwrap().discriminant(), -3);
        assert_eq!(QuadraticPoint::new(1, -1, 2).unwrap().discriminant(), -7);
        assert!(QuadraticPoint::new(2, 0, 2).is_err());
        assert!(QuadraticPoint::new(1, 3, 1).is_err());
    }

    #[test]
    fn complexity_examples() {
        let diag = SpecialSubvarietyModular::strongly_special_curve(vec![RationalScalingMatrix::identity()]).unwrap();
        assert_eq!(complexity(&diag), 1);
        let i = QuadraticPoint::new(1, 0, 1).unwrap();
        let pt = SpecialSubvarietyModular::special_point(vec![i.clone(), i]).unwrap();
        assert_eq!(complexity(&pt), 4);
        let g = RationalScalingMatrix::from_i64(2, 0, 0, 1).unwrap();
        let curve = SpecialSubvarietyModular::strongly_special_curve(vec![g]).unwrap();
        assert_eq!(complexity(&curve), 2);
        assert_eq!(curve.dim(), 1);
    }

    #[test]
    fn rational_matrices_are_scaled() {
        let half = Rational::from((1, 2));
        let g = RationalScalingMatrix::from_rationals([half.clone(), Rational::new(), Rational::new(), Rational::from(3)])
            .unwrap();
        assert_eq!(*g.entries(), Mat2::new(1, 0, 0, 6));
        assert_eq!(g.n_of_g(), 6);
        let g = RationalScalingMatrix::from_i64(2, 0, 0, 2).unwrap();
        assert_eq!(g.n_of_g(), 1);
        assert!(RationalScalingMatrix::from_i64(0, 1, 1, 0).is_err());
    }

    #[test]
    fn fibers() {
        let i = UpperHalfPoint::from_f64(128, 0.0, 1.0).unwrap();
        let diag = mobius_fiber(&[vec![], vec![0, 1]], vec![vec![RealMat2::from_f64(128, [1.0, 0.0, 0.0, 1.0])]], vec![])
            .unwrap();
        assert_eq!(diag.dim(), 1);
        assert!(diag.contains(&[i.clone(), i.clone()], 1e-30));
        let two_i = UpperHalfPoint::from_f64(128, 0.0, 2.0).unwrap();
        let f = mobius_fiber(&[vec![1], vec![0]], vec![vec![]], vec![two_i.clone()]).unwrap();
        assert!(f.contains(&[i.clone(), two_i.clone()], 1e-30));
        assert!(!f.contains(&[two_i.clone(), i], 1e-30));
        let bad = mobius_fiber(&[vec![], vec![0, 1]], vec![vec![RealMat2::from_f64(64, [0.0, 1.0, 1.0, 0.0])]], vec![]);
        assert!(bad.is_err());
    }

    #[test]
    fn parameter_heights() {
        let diag = SpecialSubvarietyModular::strongly_special_curve(vec![RationalScalingMatrix::identity()]).unwrap();
        assert_eq!(special_point_parameter_height(&diag).height, "1");
        let g = RationalScalingMatrix::from_i64(2, 0, 0, 1).unwrap();
        let curve = SpecialSubvarietyModular::strongly_special_curve(vec![g]).unwrap();
        assert_eq!(special_point_parameter_height(&curve).height, "2");
    }

    #[test]
    fn json_round_trip() {
        let s = SpecialSubvarietyModular::new(
            3,
            vec![vec![2], vec![0, 1]],
            vec![QuadraticPoint::new(1, -1, 2).unwrap()],
            vec![vec![RationalScalingMatrix::from_i64(3, 1, 0, 1).unwrap()]],
        )
        .unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains(r#""complexity":"7""#));
        assert_eq!(serde_json::from_str::<SpecialSubvarietyModular>(&j).unwrap(), s);
    }

    #[test]
    fn reduced_forms_small_discriminants() {
        // class numbers h(-3) = h(-4) = h(-7) = h(-8) = 1, h(-15) = 2, h(-20) = 2
        let pts = reduced_quadratic_points(20);
        let count = |d: i64| pts.iter().filter(|q| q.discriminant() == d).count();
        assert_eq!([count(-3), count(-4), count(-7), count(-8), count(-15), count(-20)], [1, 1, 1, 1, 2, 2]);
    }
}
