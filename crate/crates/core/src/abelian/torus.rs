//! Polarized complex tori `C^g / Omega` with a hermitian form `H`, and their subtori.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::lattice::{lattice_volume, unimodular_inverse, GramForm, IntegerLattice};
use crate::linalg::minima::{minkowski_bound, successive_minima};
use crate::linalg::{real, snf, IntMatrix, MinimaReport, RealMatrix};
use crate::numeric::{self, Complex, DEFAULT_PRECISION};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct PolarizedTorus {
    g: usize,
    /// `2g` period vectors in `C^g`.
    periods: Vec<Vec<Complex>>,
    /// `H(v, w) = sum_ij v_i H_ij conj(w_j)`.
    hermitian: Vec<Vec<Complex>>,
    /// `Re H` on the period basis.
    gram: GramForm,
    /// `Im H` on the period basis, rounded to integers.
    riemann_form: IntMatrix,
    /// Rows are the real coordinates `(Re w_1, Im w_1, ...)` of the periods.
    real_periods: RealMatrix,
    tolerance: f64,
}

/// `H(v, w)` for a hermitian matrix.
pub fn hermitian_pairing(h: &[Vec<Complex>], v: &[Complex], w: &[Complex]) -> Complex {
    let p = v[0].prec();
    let mut acc = Complex::zero(p);
    for (i, vi) in v.iter().enumerate() {
        for (j, wj) in w.iter().enumerate() {
            acc = acc + &(vi * &h[i][j]) * &wj.conj();
        }
    }
    acc
}

fn real_coords(v: &[Complex]) -> Vec<Float> {
    v.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

impl PolarizedTorus {
    pub fn new(periods: Vec<Vec<Complex>>, hermitian: Vec<Vec<Complex>>) -> Result<Self> {
        Self::with_tolerance(periods, hermitian, DEFAULT_TOLERANCE)
    }

    /// Validates `H` (hermitian, positive definite) and the Riemann condition that
    /// `Im H` is integral on periods, each within `tolerance`.
    pub fn with_tolerance(periods: Vec<Vec<Complex>>, hermitian: Vec<Vec<Complex>>, tolerance: f64) -> Result<Self> {
        let g = hermitian.len();
        if g == 0 || hermitian.iter().any(|r| r.len() != g) {
            return invalid("hermitian form must be a nonempty square matrix");
        }
        if periods.len() != 2 * g || periods.iter().any(|p| p.len() != g) {
            return invalid(format!("need {} period vectors in C^{g}", 2 * g));
        }
        for i in 0..g {
            for j in 0..=i {
                if (&hermitian[i][j] - &hermitian[j][i].conj()).abs_f64() > tolerance {
                    return Err(Error::InvalidPolarization(format!("H is not hermitian at ({i},{j})")));
                }
            }
        }
        let prec = periods.iter().flatten().map(|z| z.prec()).max().unwrap_or(DEFAULT_PRECISION);
        let n = 2 * g;
        let mut gram = real::zeros(prec, n, n);
        let mut riemann_form = vec![vec![Integer::new(); n]; n];
        for k in 0..n {
            for l in 0..n {
                let hkl = hermitian_pairing(&hermitian, &periods[k], &periods[l]);
                gram[k][l] = hkl.re.clone();
                let e = hkl.im.clone();
                let r = e.clone().round();
                if Float::with_val(prec, &e - &r).abs().to_f64() > tolerance {
                    return Err(Error::InvalidPolarization(format!(
                        "Im H(omega_{k}, omega_{l}) = {} is not an integer",
                        numeric::fmt_real(&e, 15)
                    )));
                }
                riemann_form[k][l] = r.to_integer().expect("finite");
            }
        }
        // symmetrize away rounding before the exact symmetry check of GramForm
        for k in 0..n {
            for l in 0..k {
                let avg = Float::with_val(prec, &gram[k][l] + &gram[l][k]) / 2u32;
                gram[k][l] = avg.clone();
                gram[l][k] = avg;
            }
        }
        let real_periods: RealMatrix = periods.iter().map(|p| real_coords(p)).collect();
        if real::det(&real_periods).abs().to_f64() < tolerance {
            return Err(Error::InvalidPolarization("periods are not R-linearly independent".into()));
        }
        let gram = GramForm::new(gram).map_err(|_| Error::InvalidPolarization("H is not positive definite".into()))?;
        if crate::linalg::matrix::det(&riemann_form) == 0 {
            return Err(Error::InvalidPolarization("Im H is degenerate on the periods".into()));
        }
        Ok(PolarizedTorus { g, periods, hermitian, gram, riemann_form, real_periods, tolerance })
    }

    /// `C / (Z + tau Z)` with the principal polarization `H(v, w) = v conj(w) / Im tau`.
    pub fn elliptic(tau: &Complex) -> Result<Self> {
        if tau.im <= 0 {
            return invalid("tau must lie in the upper half plane");
        }
        let p = tau.prec();
        let h = Complex::from_real(Float::with_val(p, tau.im.clone().recip()));
        Self::new(vec![vec![Complex::one(p)], vec![tau.clone()]], vec![vec![h]])
    }

    /// Product with the block-diagonal polarization.
    pub fn product(&self, other: &PolarizedTorus) -> Result<Self> {
        let (g1, g2) = (self.g, other.g);
        let p = self.prec().max(other.prec());
        let pad = |v: &[Complex], before: usize, after: usize| -> Vec<Complex> {
            let mut out = vec![Complex::zero(p); before];
            out.extend(v.iter().cloned());
            out.extend(vec![Complex::zero(p); after]);
            out
        };
        let mut periods = Vec::new();
        periods.extend(self.periods.iter().map(|v| pad(v, 0, g2)));
        periods.extend(other.periods.iter().map(|v| pad(v, g1, 0)));
        let mut h = vec![vec![Complex::zero(p); g1 + g2]; g1 + g2];
        for i in 0..g1 {
            for j in 0..g1 {
                h[i][j] = self.hermitian[i][j].clone();
            }
        }
        for i in 0..g2 {
            for j in 0..g2 {
                h[g1 + i][g1 + j] = other.hermitian[i][j].clone();
            }
        }
        Self::with_tolerance(periods, h, self.tolerance.max(other.tolerance))
    }

    /// Same periods, hermitian form multiplied by `s`.
    pub fn rescaled(&self, s: &Float) -> Result<Self> {
        let h = self.hermitian.iter().map(|r| r.iter().map(|z| z.scale(s)).collect()).collect();
        Self::with_tolerance(self.periods.clone(), h, self.tolerance)
    }

    /// Same periods, another hermitian form.
    pub fn with_hermitian(&self, h: Vec<Vec<Complex>>) -> Result<Self> {
        Self::with_tolerance(self.periods.clone(), h, self.tolerance)
    }

    pub fn dim(&self) -> usize {
        self.g
    }

    pub fn prec(&self) -> u32 {
        self.gram.prec()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn periods(&self) -> &[Vec<Complex>] {
        &self.periods
    }

    pub fn hermitian(&self) -> &[Vec<Complex>] {
        &self.hermitian
    }

    /// `Re H` restricted to the period lattice.
    pub fn gram(&self) -> &GramForm {
        &self.gram
    }

    /// `E = Im H` on the period basis.
    pub fn riemann_form(&self) -> &IntMatrix {
        &self.riemann_form
    }

    pub fn period(&self, coeffs: &[Integer]) -> Vec<Complex> {
        let p = self.prec();
        let mut out = vec![Complex::zero(p); self.g];
        for (c, w) in coeffs.iter().zip(&self.periods) {
            if *c == 0 {
                continue;
            }
            let cf = numeric::from_integer(p, c);
            for (o, wi) in out.iter_mut().zip(w) {
                *o = &*o + &wi.scale(&cf);
            }
        }
        out
    }

    /// Real coordinates of `z` with respect to the period basis.
    pub fn period_coordinates(&self, z: &[Complex]) -> Result<Vec<Float>> {
        if z.len() != self.g {
            return invalid(format!("expected a vector in C^{}", self.g));
        }
        let at = real::transpose(&self.real_periods);
        real::solve(&at, &real_coords(z)).ok_or_else(|| Error::Degenerate("singular period matrix".into()))
    }

    /// `||v|| = (Re H(v, v))^(1/2)`.
    pub fn norm(&self, v: &[Complex]) -> Float {
        hermitian_pairing(&self.hermitian, v, v).re.max(&Float::new(self.prec())).sqrt()
    }

    pub fn full(&self) -> Subtorus {
        Subtorus { parent: self.clone(), lattice: IntegerLattice::full(2 * self.g) }
    }
}

/// An abelian subvariety, given by its period lattice inside the parent's period
/// coordinates. The lattice is saturated on construction (`Omega_Y = Omega_X ∩ T_Y`).
#[derive(Clone, Debug)]
pub struct Subtorus {
    parent: PolarizedTorus,
    lattice: IntegerLattice,
}

impl Subtorus {
    pub fn new(parent: &PolarizedTorus, sublattice: IntegerLattice) -> Result<Self> {
        let n = 2 * parent.dim();
        if sublattice.ambient_dim() != n {
            return invalid(format!("sublattice must live in Z^{n}"));
        }
        let r = sublattice.rank();
        if r == 0 || !r.is_multiple_of(2) {
            return Err(Error::NotContained(format!("period sublattice has odd or zero rank {r}")));
        }
        let lattice = sublattice.saturation();
        let t = Subtorus { parent: parent.clone(), lattice };
        let res = t.complex_subspace_residual()?;
        if res > parent.tolerance {
            return Err(Error::NotContained(format!(
                "real span of the sublattice is not a complex subspace (residual {res:.3e})"
            )));
        }
        Ok(t)
    }

    pub fn from_i64(parent: &PolarizedTorus, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(parent, IntegerLattice::from_i64(2 * parent.dim(), rows)?)
    }

    /// Largest distance of `i v` from the real span, over basis periods `v`.
    pub fn complex_subspace_residual(&self) -> Result<f64> {
        let vs: Vec<Vec<Complex>> = self.lattice.basis().iter().map(|c| self.parent.period(c)).collect();
        let rows: RealMatrix = vs.iter().map(|v| real_coords(v)).collect();
        let mut worst = 0.0f64;
        for v in &vs {
            let iv: Vec<Complex> = v.iter().map(|z| z * &Complex::i(z.prec())).collect();
            let (_, res) = real::project_onto_rows(&rows, &real_coords(&iv))
                .ok_or_else(|| Error::Degenerate("sublattice periods are dependent".into()))?;
            let scale = self.parent.norm(v).to_f64().max(1e-300);
            worst = worst.max(res.to_f64() / scale.max(1.0));
        }
        Ok(worst)
    }

    pub fn parent(&self) -> &PolarizedTorus {
        &self.parent
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank() / 2
    }

    pub fn volume(&self) -> Result<Float> {
        lattice_volume(&self.lattice, self.parent.gram())
    }

    /// Unimodular basis of `Z^{2g}` whose first rows span the sublattice.
    fn adapted_basis(&self) -> (IntMatrix, IntMatrix) {
        let (_, _, right) = snf(self.lattice.basis());
        let u = unimodular_inverse(&right);
        (u, right)
    }
}

fn factorial(n: usize) -> Integer {
    (1..=n as u32).fold(Integer::from(1), |acc, k| acc * k)
}

/// `deg_L Y = (dim Y)! vol(Omega_Y)` with volume under `Re H`.
pub fn degree(t: &Subtorus) -> Result<Float> {
    let v = t.volume()?;
    Ok(v * factorial(t.dim()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparability {
    pub ratio_low: f64,
    pub ratio_high: f64,
    /// Smallest `c >= 1` with `deg_L / c <= deg_M <= c deg_L` on the sample.
    pub constant: f64,
    pub samples: usize,
}

/// Ratio `deg_M / deg_L` for `M` given by the hermitian matrix `h2`.
pub fn degree_comparability(t: &Subtorus, h2: &[Vec<Complex>]) -> Result<Comparability> {
    degree_comparability_batch(std::slice::from_ref(t), h2)
}

pub fn degree_comparability_batch(subtori: &[Subtorus], h2: &[Vec<Complex>]) -> Result<Comparability> {
    if subtori.is_empty() {
        return invalid("no subtori given");
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut other: Option<PolarizedTorus> = None;
    for t in subtori {
        let m = match &other {
            Some(m) if m.periods == t.parent.periods => m.clone(),
            _ => {
                let m = t.parent.with_hermitian(h2.to_vec())?;
                other = Some(m.clone());
                m
            }
        };
        let tm = Subtorus { parent: m, lattice: t.lattice.clone() };
        let r = Float::with_val(t.parent.prec(), degree(&tm)? / degree(t)?).to_f64();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(Comparability { ratio_low: lo, ratio_high: hi, constant: hi.max(1.0 / lo).max(1.0), samples: subtori.len() })
}

#[derive(Clone, Debug)]
pub struct SmallPeriodBasis {
    pub minima: MinimaReport,
    pub periods: Vec<Vec<Complex>>,
    pub degree: Float,
    pub product: Float,
    /// `product / degree`, the constant this instance achieves in the product bound.
    pub achieved_constant: Float,
    /// `max ||omega_i|| / degree`.
    pub achieved_constant_max: Float,
    pub minkowski_envelope: Float,
}

impl SmallPeriodBasis {
    pub fn satisfies_hadamard(&self) -> bool {
        let v = &self.minima.volume;
        let slack = Float::with_val(v.prec(), v * 1e-12);
        self.product >= Float::with_val(v.prec(), v - &slack)
    }

    pub fn satisfies_minkowski(&self) -> bool {
        self.product <= self.minkowski_envelope
    }
}

/// Independent periods of `Y` attaining the successive minima under `Re H`.
pub fn small_period_basis(t: &Subtorus) -> Result<SmallPeriodBasis> {
    let minima = successive_minima(&t.lattice, t.parent.gram())?;
    let periods = minima.achieving_vectors.iter().map(|c| t.parent.period(c)).collect();
    let deg = degree(t)?;
    let product = minima.product();
    let mx = minima.minima.last().cloned().expect("rank >= 2");
    let p = deg.prec();
    Ok(SmallPeriodBasis {
        achieved_constant: Float::with_val(p, &product / &deg),
        achieved_constant_max: Float::with_val(p, &mx / &deg),
        minkowski_envelope: minkowski_bound(minima.rank(), &minima.volume),
        periods,
        degree: deg,
        product,
        minima,
    })
}

#[derive(Clone, Debug)]
pub struct NearbyPeriod {
    /// `omega` in period coordinates of the parent.
    pub coefficients: Vec<Integer>,
    pub omega: Vec<Complex>,
    /// `z - omega`, a vector of `T_Y`.
    pub remainder: Vec<Complex>,
    pub omega_norm: Float,
    pub z_norm: Float,
    /// `||z|| + sum_i ||omega_i|| / 2`, the triangle-inequality bound of the rounding construction.
    pub bound: Float,
    /// `(bound - ||z||) / deg Y`, the constant this instance achieves.
    pub achieved_constant: Float,
    /// Distance of the remainder from `T_Y`.
    pub tangent_residual: f64,
}

/// `omega in Omega_X` with `z - omega in T_Y`, by rounding coordinates against small periods of `Y`.
pub fn nearby_period(z: &[Complex], t: &Subtorus) -> Result<NearbyPeriod> {
    let x = t.parent.period_coordinates(z)?;
    let p = t.parent.prec();
    let tol = t.parent.tolerance;
    let r = t.lattice.rank();
    let n = x.len();
    // x = beta U with U unimodular and its first r rows spanning Omega_Y
    let (u, right) = t.adapted_basis();
    let beta: Vec<Float> = (0..n)
        .map(|k| x.iter().zip(&right).fold(Float::new(p), |acc, (xi, row)| acc + Float::with_val(p, xi * &row[k])))
        .collect();
    let mut omega1 = vec![Integer::new(); n];
    for k in r..n {
        let rb = beta[k].clone().round();
        if Float::with_val(p, &beta[k] - &rb).abs().to_f64() > tol {
            return Err(Error::NotContained("z is not in Omega_X + T_Y".into()));
        }
        let c = rb.to_integer().expect("finite");
        for (o, uk) in omega1.iter_mut().zip(&u[k]) {
            *o += Integer::from(&c * uk);
        }
    }
    // y = z - omega1 in T_Y, written in the small periods of Y and rounded
    let small = small_period_basis(t)?;
    let y_coords: Vec<Float> = x
        .iter()
        .zip(&omega1)
        .map(|(xi, oi)| Float::with_val(p, xi - oi))
        .collect();
    let rows: RealMatrix = small.minima.achieving_vectors.iter().map(|v| crate::linalg::matrix::to_float(p, v)).collect();
    let (alpha, _) = real::project_onto_rows(&rows, &y_coords).ok_or_else(|| Error::Degenerate("small periods dependent".into()))?;
    let mut coefficients = omega1;
    for (a, v) in alpha.iter().zip(&small.minima.achieving_vectors) {
        let ai = a.clone().round().to_integer().expect("finite");
        for (o, vi) in coefficients.iter_mut().zip(v) {
            *o += Integer::from(&ai * vi);
        }
    }
    let omega = t.parent.period(&coefficients);
    let remainder: Vec<Complex> = z.iter().zip(&omega).map(|(a, b)| a - b).collect();
    // tangent check: remainder lies in the real span of Y's periods
    let span: RealMatrix = small.periods.iter().map(|v| real_coords(v)).collect();
    let (_, res) = real::project_onto_rows(&span, &real_coords(&remainder)).expect("independent");
    let half_sum = small.minima.minima.iter().fold(Float::new(p), |acc, m| acc + m) / 2u32;
    let z_norm = t.parent.norm(z);
    let bound = Float::with_val(p, &z_norm + &half_sum);
    Ok(NearbyPeriod {
        omega_norm: t.parent.norm(&omega),
        achieved_constant: Float::with_val(p, &half_sum / &small.degree),
        tangent_residual: res.to_f64(),
        coefficients,
        omega,
        remainder,
        z_norm,
        bound,
    })
}

/// Smallest order of a torsion point in `x + Y`, for `x` given by rational period coordinates.
pub fn minimal_torsion_order(coords: &[Rational], t: &Subtorus) -> Result<Integer> {
    let n = 2 * t.parent.dim();
    if coords.len() != n {
        return invalid(format!("expected {n} rational period coordinates"));
    }
    let (_, right) = t.adapted_basis();
    let r = t.lattice.rank();
    let mut order = Integer::from(1);
    for k in r..n {
        let b = coords.iter().zip(&right).fold(Rational::new(), |acc, (c, row)| acc + Rational::from(c * &row[k]));
        order = order.lcm(b.denom());
    }
    Ok(order)
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionCosetComplexity {
    pub arith: String,
    pub geom: f64,
    pub total: String,
}

/// `max(order, deg_L Y)`; the degree is an integer in theory, so values within the
/// tolerance of an integer are snapped to it and otherwise rounded up.
pub fn torsion_coset_complexity(order: &Integer, t: &Subtorus) -> Result<TorsionCosetComplexity> {
    if *order < 1 {
        return invalid("torsion order must be at least 1");
    }
    let geom = degree(t)?;
    let snapped = {
        let r = geom.clone().round();
        if Float::with_val(geom.prec(), &geom - &r).abs().to_f64() <= t.parent.tolerance {
            r
        } else {
            geom.clone().ceil()
        }
    };
    let g = snapped.to_integer().expect("finite").max(Integer::from(1));
    let total = Integer::from(order.max(&g));
    Ok(TorsionCosetComplexity { arith: order.to_string(), geom: geom.to_f64(), total: total.to_string() })
}

/// `lambda_X(d)`: the largest `dim(X/H) * rank Hom(X, X/H)` over the supplied quotient data.
pub fn lambda_value(quotients: &[(u64, u64)], d: usize, dim_x: usize) -> Result<u64> {
    if quotients.is_empty() {
        if d == dim_x {
            return Ok(0);
        }
        return invalid("no quotient data given for d < dim X");
    }
    Ok(quotients.iter().map(|(a, b)| a * b).max().expect("nonempty"))
}

#[derive(Clone, Debug)]
pub struct ComplexityBounds {
    /// `c D^{6g+1}`
    pub arith: Float,
    /// `c D^{60 g^4} max(1, h)^lambda`
    pub total: Float,
}

pub fn complexity_bound(c: f64, degree_kp: u64, g: u32, height: f64, lambda: u32) -> Result<ComplexityBounds> {
    if c <= 0.0 || degree_kp < 1 || g < 1 {
        return invalid("need c > 0, [K(P):K] >= 1, g >= 1");
    }
    let prec = DEFAULT_PRECISION;
    let d = Float::with_val(prec, degree_kp);
    use rug::ops::Pow;
    let arith = Float::with_val(prec, c) * Float::with_val(prec, (&d).pow(6 * g + 1));
    let hmax = Float::with_val(prec, height.max(1.0));
    let total = Float::with_val(prec, c) * Float::with_val(prec, (&d).pow(60 * g.pow(4))) * hmax.pow(lambda);
    Ok(ComplexityBounds { arith, total })
}

#[derive(Serialize, Deserialize)]
pub struct TorusJson {
    pub g: usize,
    /// Each period as `[re_1, im_1, ..., re_g, im_g]`.
    pub periods: Vec<Vec<serde_json::Value>>,
    /// Row-major `g x g` entries as `[re, im]`.
    pub hermitian: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

fn real_from_json(prec: u32, v: &serde_json::Value) -> Result<Float> {
    match v {
        serde_json::Value::Number(n) => Ok(Float::with_val(prec, n.as_f64().unwrap_or(f64::NAN))),
        serde_json::Value::String(s) => numeric::parse_real(prec, s),
        other => invalid(format!("expected a real number, got {other}")),
    }
}

impl TorusJson {
    pub fn into_torus(self, prec: u32) -> Result<PolarizedTorus> {
        let g = self.g;
        let periods = self
            .periods
            .iter()
            .map(|p| {
                if p.len() != 2 * g {
                    return invalid(format!("each period needs {} reals", 2 * g));
                }
                p.chunks(2)
                    .map(|c| Ok(Complex::new(real_from_json(prec, &c[0])?, real_from_json(prec, &c[1])?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if self.hermitian.len() != g * g || self.hermitian.iter().any(|e| e.len() != 2) {
            return invalid(format!("hermitian needs {} [re, im] entries", g * g));
        }
        let flat = self
            .hermitian
            .iter()
            .map(|e| Ok(Complex::new(real_from_json(prec, &e[0])?, real_from_json(prec, &e[1])?)))
            .collect::<Result<Vec<_>>>()?;
        let h = flat.chunks(g).map(|r| r.to_vec()).collect();
        PolarizedTorus::with_tolerance(periods, h, self.tolerance.unwrap_or(DEFAULT_TOLERANCE))
    }

    pub fn from_torus(t: &PolarizedTorus) -> Self {
        let s = |x: &Float| serde_json::Value::String(numeric::fmt_real(x, 40));
        TorusJson {
            g: t.g,
            periods: t.periods.iter().map(|p| p.iter().flat_map(|z| [s(&z.re), s(&z.im)]).collect()).collect(),
            hermitian: t.hermitian.iter().flatten().map(|z| vec![s(&z.re), s(&z.im)]).collect(),
            tolerance: Some(t.tolerance),
        }
    }
}
