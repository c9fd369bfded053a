//! Short homomorphisms `X -> Y` that kill a given point, searched in a lattice of
//! homomorphisms given by their integer rational representations.

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use super::torus::PolarizedTorus;
use crate::error::{invalid, Error, Result};
use crate::linalg::lll::{lll_reduce, DEFAULT_DELTA};
use crate::linalg::minima::enumerate;
use crate::linalg::{lattice, matrix, real, GramForm, IntMatrix, IntegerLattice, RealMatrix};
use crate::numeric::Complex;

/// Frobenius radius past which the search gives up, unless the caller sets one.
pub const DEFAULT_MAX_NORM: f64 = 1e4;

#[derive(Clone, Debug)]
pub struct AnnihilatingHom {
    /// `2 g_Y x 2 g_X` integer matrix acting on period coordinates.
    pub matrix: IntMatrix,
    /// Coefficients over the supplied generators when those are independent.
    pub coefficients: Option<Vec<Integer>>,
    /// Frobenius norm of `matrix`.
    pub norm: Float,
    /// `Re H_Y`-distance of `phi(p_log)` to the nearest period of `Y` found by rounding.
    pub residual: f64,
    /// Real rank of the tangent map, `2 dim Y` when surjective.
    pub tangent_rank: usize,
    pub surjective: bool,
    /// Squared radius of the last enumeration.
    pub search_radius2: f64,
    pub candidates_examined: usize,
}

/// `A_X^{-1} C^T A_Y`, the real-linear map on row vectors of real coordinates.
fn real_map(x: &PolarizedTorus, y: &PolarizedTorus, c: &IntMatrix) -> Result<RealMatrix> {
    let p = x.prec().max(y.prec());
    let ax = real_rows(x);
    let ay = real_rows(y);
    let ct_ay = real::mul(&real::transpose(&to_real(p, c)), &ay);
    let cols = real::transpose(&ct_ay);
    let mut out = Vec::with_capacity(cols.len());
    for col in &cols {
        out.push(real::solve(&ax, col).ok_or_else(|| Error::Degenerate("singular period matrix".into()))?);
    }
    Ok(real::transpose(&out))
}

fn real_rows(t: &PolarizedTorus) -> RealMatrix {
    t.periods().iter().map(|v| v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()).collect()
}

fn to_real(p: u32, m: &IntMatrix) -> RealMatrix {
    m.iter().map(|r| matrix::to_float(p, r)).collect()
}

/// Multiplication by `i` on row vectors of real coordinates.
fn times_i(m: &RealMatrix, left: bool) -> RealMatrix {
    let p = real::prec_of(m);
    let (r, c) = (m.len(), m[0].len());
    let mut out = real::zeros(p, r, c);
    if left {
        // J M: (a, b) rows -> (M_b, -M_a)
        for k in (0..r).step_by(2) {
            for j in 0..c {
                out[k][j] = m[k + 1][j].clone();
                out[k + 1][j] = Float::with_val(p, -&m[k][j]);
            }
        }
    } else {
        // M J: columns (a, b) -> (-b, a)
        for i in 0..r {
            for k in (0..c).step_by(2) {
                out[i][k] = Float::with_val(p, -&m[i][k + 1]);
                out[i][k + 1] = m[i][k].clone();
            }
        }
    }
    out
}

/// Whether `c` (period coordinates of `x` to those of `y`) is complex-linear on tangent spaces.
pub fn is_homomorphism(x: &PolarizedTorus, y: &PolarizedTorus, c: &IntMatrix) -> Result<bool> {
    if c.len() != 2 * y.dim() || c.iter().any(|r| r.len() != 2 * x.dim()) {
        return invalid(format!("homomorphism matrices must be {} x {}", 2 * y.dim(), 2 * x.dim()));
    }
    let m = real_map(x, y, c)?;
    let (jm, mj) = (times_i(&m, true), times_i(&m, false));
    let scale = m.iter().flatten().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    let err = jm.iter().flatten().zip(mj.iter().flatten()).map(|(a, b)| Float::with_val(a.prec(), a - b).abs().to_f64()).fold(0.0, f64::max);
    Ok(err <= x.tolerance().max(y.tolerance()) * scale)
}

/// `phi(x)` and its residual under `Re H_Y` after rounding to `Z^{2 g_Y}`.
fn residual(c: &IntMatrix, x: &[Float], gram_y: &GramForm) -> f64 {
    let p = gram_y.prec();
    let v: Vec<Float> = c
        .iter()
        .map(|row| row.iter().zip(x).fold(Float::new(p), |acc, (a, b)| acc + Float::with_val(p, a * b)))
        .collect();
    let d: Vec<Float> = v.iter().map(|t| Float::with_val(p, t - t.clone().round())).collect();
    gram_y.inner_real(&d, &d).max(&Float::new(p)).sqrt().to_f64()
}

/// Exact check that `phi(x)` is a period, for rational period coordinates `x`.
pub fn annihilates_exactly(c: &IntMatrix, coords: &[Rational]) -> bool {
    c.iter().all(|row| {
        let s = row.iter().zip(coords).fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b));
        *s.denom() == 1
    })
}

fn flatten(m: &IntMatrix) -> Vec<Integer> {
    m.iter().flatten().cloned().collect()
}

fn unflatten(v: &[Integer], cols: usize) -> IntMatrix {
    v.chunks(cols).map(|r| r.to_vec()).collect()
}

/// Sign with the first nonzero entry positive.
fn canonical_sign(v: &mut [Integer]) {
    if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        v.iter_mut().for_each(|x| *x = Integer::from(-&*x));
    }
}

pub fn small_annihilating_hom(
    source: &PolarizedTorus,
    generators: &[IntMatrix],
    p_log: &[Complex],
    target: &PolarizedTorus,
) -> Result<AnnihilatingHom> {
    small_annihilating_hom_bounded(source, generators, p_log, target, DEFAULT_MAX_NORM)
}

/// Shortest `phi` (Frobenius norm) in the span of `generators` with `phi(p_log)` a period of
/// `target`. The search enumerates balls of doubling radius in an LLL-reduced basis.
pub fn small_annihilating_hom_bounded(
    source: &PolarizedTorus,
    generators: &[IntMatrix],
    p_log: &[Complex],
    target: &PolarizedTorus,
    max_norm: f64,
) -> Result<AnnihilatingHom> {
    if generators.is_empty() {
        return invalid("the homomorphism lattice needs at least one generator");
    }
    for (i, c) in generators.iter().enumerate() {
        if !is_homomorphism(source, target, c)? {
            return invalid(format!("generator {i} is not complex-linear"));
        }
    }
    let x = source.period_coordinates(p_log)?;
    let cols = 2 * source.dim();
    let n = 2 * target.dim() * cols;
    let flat: IntMatrix = generators.iter().map(flatten).collect();
    let independent = lattice::rank(&flat) == flat.len();
    let lat = IntegerLattice::new(n, flat.clone())?;
    if lat.is_zero() {
        return Err(Error::Degenerate("all generators vanish".into()));
    }
    let form = GramForm::identity(n);
    let basis = lll_reduce(&lat, &form, DEFAULT_DELTA)?.basis;
    let g64: Vec<Vec<f64>> = form.gram_of(&basis).iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect();
    let tol = source.tolerance().max(target.tolerance());
    let flat_f: RealMatrix = flat.iter().map(|r| matrix::to_float(source.prec(), r)).collect();

    let mut radius2 = g64.iter().enumerate().map(|(i, r)| r[i]).fold(f64::MAX, f64::min) * (1.0 + 1e-9);
    let mut examined = 0;
    loop {
        let cands = enumerate(&g64, radius2)?;
        examined += cands.len();
        let hits: Vec<(Integer, Vec<Integer>, IntMatrix, f64)> = cands
            .par_iter()
            .filter_map(|k| {
                let mut v = vec![Integer::new(); n];
                for (ki, b) in k.iter().zip(&basis) {
                    matrix::axpy(&mut v, ki, b);
                }
                canonical_sign(&mut v);
                let m = unflatten(&v, cols);
                let r = residual(&m, &x, target.gram());
                (r <= tol).then(|| (matrix::dot(&v, &v), v, m, r))
            })
            .collect();
        if let Some((_, v, m, r)) = hits.into_iter().min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))) {
            let coefficients = if independent { express(&flat, &flat_f, &v) } else { None };
            let tangent_rank = lattice::rank(&m);
            return Ok(AnnihilatingHom {
                norm: matrix::frobenius_norm(source.prec(), &m),
                surjective: tangent_rank == 2 * target.dim(),
                matrix: m,
                coefficients,
                residual: r,
                tangent_rank,
                search_radius2: radius2,
                candidates_examined: examined,
            });
        }
        if radius2 > max_norm * max_norm {
            return Err(Error::NoCandidate(format!(
                "no annihilating homomorphism of Frobenius norm <= {max_norm} (searched radius^2 {radius2})"
            )));
        }
        radius2 *= 4.0;
    }
}

/// Integer coefficients of `v` over independent rows, verified exactly.
fn express(rows: &IntMatrix, rows_f: &RealMatrix, v: &[Integer]) -> Option<Vec<Integer>> {
    let p = real::prec_of(rows_f);
    let (a, _) = real::project_onto_rows(rows_f, &matrix::to_float(p, v))?;
    let k: Vec<Integer> = a.iter().map(|t| t.clone().round().to_integer().expect("finite")).collect();
    let mut back = vec![Integer::new(); v.len()];
    for (ki, r) in k.iter().zip(rows) {
        matrix::axpy(&mut back, ki, r);
    }
    (back == v).then_some(k)
}

/// The two projections `E x E -> E` as period-coordinate matrices.
pub fn product_projections(g1: usize, g2: usize) -> (IntMatrix, IntMatrix) {
    let n = 2 * (g1 + g2);
    let proj = |start: usize, len: usize| -> IntMatrix {
        (0..len)
            .map(|i| (0..n).map(|j| Integer::from((j == start + i) as i32)).collect())
            .collect()
    };
    (proj(0, 2 * g1), proj(2 * g1, 2 * g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn curve() -> PolarizedTorus {
        PolarizedTorus::elliptic(&Complex::from_f64(128, 0.17, 1.31)).unwrap()
    }

    #[test]
    fn period_point_any_generator() {
        let e = curve();
        let x = e.product(&e).unwrap();
        let (p1, p2) = product_projections(1, 1);
        let w = x.period(&[1, 2, -1, 0].map(Integer::from));
        let r = small_annihilating_hom(&x, &[p1.clone(), p2], &w, &e).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!((r.norm.to_f64() - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.surjective);
    }

    #[test]
    fn diagonal_point_gives_difference() {
        let e = curve();
        let x = e.product(&e).unwrap();
        let (p1, p2) = product_projections(1, 1);
        // a generic point of C, not a period
        let w = Complex::from_f64(128, 0.3217, 0.2718);
        let r = small_annihilating_hom(&x, &[p1, p2], &[w.clone(), w], &e).unwrap();
        assert_eq!(r.coefficients.unwrap(), vec![Integer::from(1), Integer::from(-1)]);
        assert!(r.residual < 1e-30);
        assert!((r.norm.to_f64() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_torsion_killed_exactly() {
        let e = curve();
        let x = e.product(&e).unwrap();
        let (p1, p2) = product_projections(1, 1);
        let gens = [p1, p2];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m: i64 = rng.random_range(2..8);
            let coords: Vec<Rational> = (0..4).map(|_| Rational::from((rng.random_range(0..m), m))).collect();
            let z: Vec<Complex> = (0..2)
                .map(|k| {
                    let f = |q: &Rational| Complex::from_rational(128, q);
                    &f(&coords[2 * k]) * &e.periods()[0][0] + &f(&coords[2 * k + 1]) * &e.periods()[1][0]
                })
                .collect();
            let r = small_annihilating_hom(&x, &gens, &z, &e).unwrap();
            assert!(annihilates_exactly(&r.matrix, &coords));
            assert!(r.norm.to_f64() <= m as f64 * 2f64.sqrt() + 1e-9);
        }
    }

    #[test]
    fn rejects_non_holomorphic_generator() {
        let e = curve();
        let bad = matrix::from_i64(&[vec![1, 0], vec![0, 2]]);
        assert!(!is_homomorphism(&e, &e, &bad).unwrap());
        let w = vec![Complex::from_f64(128, 0.1, 0.1)];
        assert!(small_annihilating_hom(&e, &[bad], &w, &e).is_err());
    }

    #[test]
    fn bound_reported() {
        let e = curve();
        let w = vec![Complex::from_f64(128, 0.3217, 0.2718)];
        let id = matrix::identity(2);
        match small_annihilating_hom_bounded(&e, &[id], &w, &e, 10.0) {
            Err(Error::NoCandidate(msg)) => assert!(msg.contains("10")),
            other => panic!("{other:?}"),
        }
    }
}
