//! Point counts `N(Z(k, T))` on explicit sets and the semi-rational `pi_2`-image count.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_bounded_with, BoundedNumber, EnumerationLimits, Interval};
use super::expr::{Exact, Expr};
use super::height::{k_height_of_min_poly, k_height_rational};
use crate::error::{invalid, Error, Result};
use crate::numeric::{self, DEFAULT_PRECISION};

pub const DEFAULT_MEMBERSHIP_TOLERANCE: f64 = 1e-9;
/// Grid used to isolate parameter values on curves whose driving coordinate is not the parameter.
pub const DEFAULT_GRID: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SetSpec {
    /// `{(x, f(x)) : x in domain}`
    Graph { f: Expr, domain: Interval },
    /// Graph of `sum c_i x^i`, coefficients lowest degree first.
    PolynomialGraph { coeffs: Vec<String>, domain: Interval },
    /// `{(c_1(t), ..., c_N(t)) : t in param}`
    Curve { coords: Vec<Expr>, param: Interval },
    /// Finite list of rational points.
    Points { points: Vec<Vec<String>> },
    Union { sets: Vec<SetSpec> },
    Empty { dim: usize },
}

#[derive(Clone, Debug)]
enum Piece {
    Curve { coords: Vec<Expr>, param: Interval },
    Points(Vec<Vec<Rational>>),
}

impl SetSpec {
    fn pieces(&self) -> Result<Vec<Piece>> {
        Ok(match self {
            SetSpec::Graph { f, domain } => {
                f.validate()?;
                vec![Piece::Curve { coords: vec![Expr::Var, f.clone()], param: domain.clone() }]
            }
            SetSpec::PolynomialGraph { coeffs, domain } => {
                let c = coeffs.iter().map(|s| numeric::parse_rational(s)).collect::<Result<Vec<_>>>()?;
                vec![Piece::Curve { coords: vec![Expr::Var, Expr::polynomial(&c)], param: domain.clone() }]
            }
            SetSpec::Curve { coords, param } => {
                if coords.is_empty() {
                    return invalid("a curve needs at least one coordinate");
                }
                coords.iter().try_for_each(Expr::validate)?;
                vec![Piece::Curve { coords: coords.clone(), param: param.clone() }]
            }
            SetSpec::Points { points } => {
                let pts = points
                    .iter()
                    .map(|p| p.iter().map(|s| numeric::parse_rational(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                vec![Piece::Points(pts)]
            }
            SetSpec::Union { sets } => {
                let mut out = Vec::new();
                for s in sets {
                    out.extend(s.pieces()?);
                }
                out
            }
            SetSpec::Empty { .. } => vec![],
        })
    }

    /// Ambient dimension, `None` for an empty point list or union.
    pub fn dim(&self) -> Option<usize> {
        match self {
            SetSpec::Graph { .. } | SetSpec::PolynomialGraph { .. } => Some(2),
            SetSpec::Curve { coords, .. } => Some(coords.len()),
            SetSpec::Points { points } => points.first().map(Vec::len),
            SetSpec::Union { sets } => sets.iter().find_map(SetSpec::dim),
            SetSpec::Empty { dim } => Some(*dim),
        }
    }
}

/// A set `Z` in `R^m x R^n` with the split into `(y, z)` coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefinableSample {
    #[serde(flatten)]
    pub set: SetSpec,
    /// `(m, n)`; defaults to all coordinates in `y` except the last.
    #[serde(default)]
    pub split: Option<(usize, usize)>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_MEMBERSHIP_TOLERANCE
}

impl DefinableSample {
    pub fn new(set: SetSpec) -> Result<Self> {
        let s = DefinableSample { set, split: None, tolerance: DEFAULT_MEMBERSHIP_TOLERANCE };
        s.check()?;
        Ok(s)
    }

    pub fn with_split(mut self, m: usize, n: usize) -> Result<Self> {
        self.split = Some((m, n));
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        let pieces = self.set.pieces()?;
        let dim = self.dim();
        for p in &pieces {
            let d = match p {
                Piece::Curve { coords, .. } => coords.len(),
                Piece::Points(pts) => {
                    if pts.iter().any(|q| q.len() != dim) {
                        return invalid("points of different dimensions");
                    }
                    dim
                }
            };
            if d != dim {
                return invalid("pieces of a union must have the same dimension");
            }
        }
        if let Some((m, n)) = self.split {
            if m + n != dim || m == 0 {
                return invalid(format!("split ({m}, {n}) does not match dimension {dim}"));
            }
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return invalid("tolerance must be positive");
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.set.dim().unwrap_or(0)
    }

    pub fn split(&self) -> (usize, usize) {
        self.split.unwrap_or(match self.dim() {
            d @ 0..=1 => (d, 0),
            d => (d - 1, 1),
        })
    }

    /// Membership within the tolerance (max norm). For curves whose first coordinate is
    /// not the parameter this is a grid search refined by bisection, so it is a heuristic.
    pub fn contains(&self, point: &[Float]) -> bool {
        let Ok(pieces) = self.set.pieces() else { return false };
        let tol = self.tolerance;
        pieces.iter().any(|p| match p {
            Piece::Points(pts) => pts.iter().any(|q| {
                q.len() == point.len()
                    && q.iter().zip(point).all(|(a, b)| Float::with_val(b.prec(), b - a).abs().to_f64() <= tol * (1.0 + b.to_f64().abs()))
            }),
            Piece::Curve { coords, param } => {
                if coords.len() != point.len() {
                    return false;
                }
                let close = |t: &Float| {
                    coords.iter().zip(point).all(|(c, v)| {
                        let x = c.eval(t);
                        x.is_finite() && Float::with_val(v.prec(), &x - v).abs().to_f64() <= tol * (1.0 + v.to_f64().abs())
                    })
                };
                match driver(coords, 0..coords.len()) {
                    None => close(&Float::with_val(DEFAULT_PRECISION, &param.lo)),
                    Some(j) if coords[j] == Expr::Var => param.contains(&point[j]) && close(&point[j]),
                    Some(j) => solve_on_grid(&coords[j], param, &point[j], DEFAULT_GRID).iter().any(close),
                }
            }
        })
    }

    /// Image of `u in [0, 1]` under the parametrization of the first curve piece.
    pub fn parametrize(&self, u: f64) -> Option<Vec<Float>> {
        let pieces = self.set.pieces().ok()?;
        pieces.iter().find_map(|p| match p {
            Piece::Curve { coords, param } => {
                let w = Rational::from(&param.hi - &param.lo);
                let t = Float::with_val(DEFAULT_PRECISION, &param.lo) + Float::with_val(DEFAULT_PRECISION, &w) * u;
                let v: Vec<Float> = coords.iter().map(|c| c.eval(&t)).collect();
                v.iter().all(|x| x.is_finite()).then_some(v)
            }
            Piece::Points(_) => None,
        })
    }
}

/// First coordinate among `range` that is the parameter itself, else the first that depends on it.
fn driver(coords: &[Expr], range: std::ops::Range<usize>) -> Option<usize> {
    range.clone().find(|&j| coords[j] == Expr::Var).or_else(|| range.clone().find(|&j| coords[j].depends_on_var()))
}

fn grid(param: &Interval, n: usize) -> Vec<Float> {
    let lo = Float::with_val(DEFAULT_PRECISION, &param.lo);
    let w = Float::with_val(DEFAULT_PRECISION, Rational::from(&param.hi - &param.lo));
    (0..=n).map(|i| Float::with_val(DEFAULT_PRECISION, &lo + Float::with_val(DEFAULT_PRECISION, &w * i as u32) / n as u32)).collect()
}

fn bisect(f: &Expr, target: &Float, mut a: Float, mut b: Float) -> Float {
    let sa = Float::with_val(DEFAULT_PRECISION, f.eval(&a) - target).is_sign_positive();
    for _ in 0..(DEFAULT_PRECISION + 8) {
        let m = Float::with_val(DEFAULT_PRECISION, &a + &b) / 2u32;
        if Float::with_val(DEFAULT_PRECISION, f.eval(&m) - target).is_sign_positive() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Float::with_val(DEFAULT_PRECISION, &a + &b) / 2u32
}

/// Parameters `t` with `f(t) = y`, found by sign changes on a grid (tangential roots are missed).
fn solve_on_grid(f: &Expr, param: &Interval, y: &Float, n: usize) -> Vec<Float> {
    let ts = grid(param, n);
    let vals: Vec<Float> = ts.iter().map(|t| Float::with_val(DEFAULT_PRECISION, f.eval(t) - y)).collect();
    roots_from_grid(f, &ts, &vals, y)
}

fn roots_from_grid(f: &Expr, ts: &[Float], vals: &[Float], y: &Float) -> Vec<Float> {
    let mut out = Vec::new();
    for i in 0..vals.len() {
        if vals[i].is_zero() {
            out.push(ts[i].clone());
        } else if i + 1 < vals.len() && vals[i].is_finite() && vals[i + 1].is_finite() && !vals[i + 1].is_zero() && vals[i].is_sign_positive() != vals[i + 1].is_sign_positive() {
            out.push(bisect(f, y, ts[i].clone(), ts[i + 1].clone()));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    Full,
    Isolated,
    Pi2Image,
}

impl std::fmt::Display for CountMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CountMode::Full => "full",
            CountMode::Isolated => "isolated",
            CountMode::Pi2Image => "pi2-image",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountResult {
    pub k: usize,
    #[serde(rename = "T")]
    pub t: u64,
    pub count: usize,
    pub mode: CountMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Vec<String>>>,
    /// Points found before projecting (semi-rational mode) or before deduplication.
    pub tuples: usize,
    /// Fibres `Z_y` of positive dimension met during the search; their points are not counted.
    pub non_isolated_fibers: usize,
    /// Smallest distance from a numerically evaluated coordinate to a rejected candidate.
    pub min_margin: Option<f64>,
    /// Largest distance at which a numerical coordinate was accepted.
    pub max_accepted_distance: Option<f64>,
    pub tolerance: f64,
    pub warnings: Vec<String>,
}

/// A located point: per coordinate an exact description when one is known, and the value.
#[derive(Clone, Debug)]
struct Found {
    values: Vec<Float>,
    labels: Vec<String>,
}

#[derive(Default)]
struct Audit {
    min_margin: Option<f64>,
    max_accepted: Option<f64>,
    warnings: Vec<String>,
    non_isolated: usize,
}

impl Audit {
    fn merge(&mut self, o: Audit) {
        self.min_margin = min_opt(self.min_margin, o.min_margin);
        self.max_accepted = max_opt(self.max_accepted, o.max_accepted);
        for w in o.warnings {
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
        self.non_isolated += o.non_isolated;
    }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Candidates of height `<= T` per unit cell, enumerated on demand.
struct Candidates<'a> {
    k: usize,
    t: u64,
    limits: &'a EnumerationLimits,
    cells: std::sync::Mutex<HashMap<i64, std::sync::Arc<Vec<BoundedNumber>>>>,
}

impl Candidates<'_> {
    fn cell(&self, n: i64) -> Result<std::sync::Arc<Vec<BoundedNumber>>> {
        if let Some(c) = self.cells.lock().expect("poisoned").get(&n) {
            return Ok(c.clone());
        }
        let iv = Interval::new(n, n + 1)?;
        let v = std::sync::Arc::new(enumerate_bounded_with(self.k, self.t, &iv, self.limits)?);
        self.cells.lock().expect("poisoned").insert(n, v.clone());
        Ok(v)
    }

    /// Nearest candidate to `v` and its distance.
    fn nearest(&self, v: &Float) -> Result<Option<(BoundedNumber, f64)>> {
        let bound = self.t as f64 + 1.0;
        let x = v.to_f64();
        if !x.is_finite() || x.abs() > bound + 1.0 {
            return Ok(None);
        }
        let n = x.floor() as i64;
        let mut best: Option<(BoundedNumber, f64)> = None;
        for cell in [n - 1, n, n + 1] {
            let c = self.cell(cell)?;
            let i = c.partition_point(|b| b.value < *v);
            for j in [i.wrapping_sub(1), i] {
                if let Some(b) = c.get(j) {
                    let d = Float::with_val(DEFAULT_PRECISION, &b.value - v).abs().to_f64();
                    if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                        best = Some((b.clone(), d));
                    }
                }
            }
        }
        Ok(best)
    }
}

struct Ctx<'a> {
    k: usize,
    t: Integer,
    tol: f64,
    cands: Candidates<'a>,
}

impl Ctx<'_> {
    /// Whether a coordinate has k-height `<= T`, with a label for the witness.
    fn bounded(&self, exact: &Exact, value: &Float, audit: &mut Audit) -> Result<Option<String>> {
        match exact {
            Exact::Rational(q) => Ok(k_height_rational(q, self.k)?.at_most(&self.t).then(|| q.to_string())),
            Exact::Algebraic(m) => Ok(k_height_of_min_poly(m, self.k)?
                .at_most(&self.t)
                .then(|| BoundedNumber { min_poly: m.clone(), value: value.clone(), rational: None }.to_string())),
            Exact::Transcendental | Exact::Undefined => Ok(None),
            Exact::Unknown => {
                if !value.is_finite() {
                    return Ok(None);
                }
                let Some((b, d)) = self.cands.nearest(value)? else { return Ok(None) };
                let tol = self.tol * (1.0 + value.to_f64().abs());
                if d <= tol {
                    audit.max_accepted = max_opt(audit.max_accepted, Some(d));
                    if d > tol / 100.0 {
                        audit.warnings.push("a numerical match is within tolerance but not clean; results may contain spurious points".into());
                    }
                    Ok(Some(b.to_string()))
                } else {
                    audit.min_margin = min_opt(audit.min_margin, Some(d));
                    if d < 10.0 * tol {
                        audit.warnings.push("a rejected candidate lies within 10x the tolerance".into());
                    }
                    Ok(None)
                }
            }
        }
    }
}

fn label_of(exact: &Exact, value: &Float) -> String {
    match exact {
        Exact::Rational(q) => q.to_string(),
        Exact::Algebraic(m) => BoundedNumber { min_poly: m.clone(), value: value.clone(), rational: None }.to_string(),
        _ => numeric::fmt_real(value, 20),
    }
}

fn rational_float(q: &Rational) -> Float {
    Float::with_val(DEFAULT_PRECISION, q)
}

/// Points of one piece with the coordinates in `restricted` of k-height `<= T`.
fn search_piece(piece: &Piece, restricted: usize, ctx: &Ctx, limits: &EnumerationLimits) -> Result<(Vec<Found>, Audit)> {
    let mut audit = Audit::default();
    let mut found = Vec::new();
    match piece {
        Piece::Points(pts) => {
            for p in pts {
                let mut labels = Vec::new();
                let mut ok = true;
                for (i, q) in p.iter().enumerate() {
                    if i < restricted {
                        match ctx.bounded(&Exact::Rational(q.clone()), &rational_float(q), &mut audit)? {
                            Some(l) => labels.push(l),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    } else {
                        labels.push(q.to_string());
                    }
                }
                if ok {
                    found.push(Found { values: p.iter().map(rational_float).collect(), labels });
                }
            }
        }
        Piece::Curve { coords, param } => {
            let Some(j) = driver(coords, 0..restricted) else {
                // the restricted coordinates are constant along the curve
                let t0 = rational_float(&param.lo);
                let mut labels = Vec::new();
                for c in &coords[..restricted] {
                    let ex = c.eval_exact(&Exact::Rational(param.lo.clone()));
                    match ctx.bounded(&ex, &c.eval(&t0), &mut audit)? {
                        Some(l) => labels.push(l),
                        None => return Ok((found, audit)),
                    }
                }
                if param.lo == param.hi || restricted == coords.len() {
                    for c in &coords[restricted..] {
                        let ex = c.eval_exact(&Exact::Rational(param.lo.clone()));
                        labels.push(label_of(&ex, &c.eval(&t0)));
                    }
                    found.push(Found { values: coords.iter().map(|c| c.eval(&t0)).collect(), labels });
                } else {
                    audit.non_isolated += 1;
                }
                return Ok((found, audit));
            };
            let bound = Rational::from(ctx.t.clone() + 1u32);
            // parameter values, exact when the driver is the parameter itself
            let mut params: Vec<(Float, Exact, String)> = Vec::new();
            if coords[j] == Expr::Var {
                let lo = param.lo.clone().max(Rational::from(-&bound));
                let hi = param.hi.clone().min(bound.clone());
                if lo <= hi {
                    for b in enumerate_bounded_with(ctx.k, ctx.t.to_u64().expect("small"), &Interval::new(lo, hi)?, limits)? {
                        params.push((b.value.clone(), Exact::from_bounded(&b), b.to_string()));
                    }
                }
            } else {
                let ts = grid(param, DEFAULT_GRID);
                let vals: Vec<Float> = ts.iter().map(|t| coords[j].eval(t)).collect();
                let finite: Vec<f64> = vals.iter().filter(|v| v.is_finite()).map(|v| v.to_f64()).collect();
                if finite.is_empty() {
                    return Ok((found, audit));
                }
                let spread = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - finite.iter().cloned().fold(f64::INFINITY, f64::min);
                if spread <= ctx.tol {
                    audit.warnings.push("driving coordinate is numerically constant; treated as a positive-dimensional fibre".into());
                    audit.non_isolated += 1;
                    return Ok((found, audit));
                }
                let lo = finite.iter().cloned().fold(f64::INFINITY, f64::min).floor().max(-bound.to_f64());
                let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil().min(bound.to_f64());
                if lo <= hi {
                    let ys = enumerate_bounded_with(ctx.k, ctx.t.to_u64().expect("small"), &Interval::new(Rational::from_f64(lo).unwrap(), Rational::from_f64(hi).unwrap())?, limits)?;
                    let per: Vec<Vec<(Float, Exact, String)>> = ys
                        .par_iter()
                        .map(|y| {
                            let diffs: Vec<Float> = vals.iter().map(|v| Float::with_val(DEFAULT_PRECISION, v - &y.value)).collect();
                            roots_from_grid(&coords[j], &ts, &diffs, &y.value)
                                .into_iter()
                                .map(|t| (t, Exact::Unknown, y.to_string()))
                                .collect()
                        })
                        .collect();
                    params.extend(per.into_iter().flatten());
                }
            }
            let results: Vec<Result<(Option<Found>, Audit)>> = params
                .par_iter()
                .map(|(t, ex, driver_label)| {
                    let mut a = Audit::default();
                    if coords[j] == Expr::Var && !param.contains(t) {
                        return Ok((None, a));
                    }
                    let mut labels = Vec::with_capacity(coords.len());
                    let mut values = Vec::with_capacity(coords.len());
                    for (i, c) in coords.iter().enumerate() {
                        let v = c.eval(t);
                        let e = c.eval_exact(ex);
                        if matches!(e, Exact::Undefined) || !v.is_finite() {
                            return Ok((None, a));
                        }
                        if i == j {
                            labels.push(driver_label.clone());
                        } else if i < restricted {
                            match ctx.bounded(&e, &v, &mut a)? {
                                Some(l) => labels.push(l),
                                None => return Ok((None, a)),
                            }
                        } else {
                            labels.push(label_of(&e, &v));
                        }
                        values.push(v);
                    }
                    Ok((Some(Found { values, labels }), a))
                })
                .collect();
            for r in results {
                let (f, a) = r?;
                audit.merge(a);
                found.extend(f);
            }
        }
    }
    Ok((found, audit))
}

/// Distinct tuples, comparing values within the tolerance.
fn dedupe(mut pts: Vec<(Vec<Float>, Vec<String>)>, tol: f64) -> Vec<(Vec<Float>, Vec<String>)> {
    pts.sort_by(|a, b| {
        for (x, y) in a.0.iter().zip(&b.0) {
            match x.partial_cmp(y) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    let mut out: Vec<(Vec<Float>, Vec<String>)> = Vec::new();
    for p in pts {
        let same = |q: &(Vec<Float>, Vec<String>)| {
            q.0.iter().zip(&p.0).all(|(a, b)| {
                Float::with_val(DEFAULT_PRECISION, a - b).abs().to_f64() <= tol * (1.0 + a.to_f64().abs())
            })
        };
        // equal first coordinates are adjacent after sorting; scan back over the near-equal block
        let dup = out.iter().rev().take_while(|q| {
            Float::with_val(DEFAULT_PRECISION, &q.0[0] - &p.0[0]).abs().to_f64() <= tol * (1.0 + p.0[0].to_f64().abs())
        }).any(same);
        if !dup {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct CountOptions {
    pub keep_witnesses: bool,
    pub limits: EnumerationLimits,
}


fn run(z: &DefinableSample, k: usize, t: u64, mode: CountMode, opts: &CountOptions) -> Result<CountResult> {
    z.check()?;
    let (m, _) = z.split();
    if mode != CountMode::Full && m >= z.dim() {
        return Err(Error::InvalidInput("semi-rational counts need a nonempty z part".into()));
    }
    let restricted = if mode == CountMode::Full { z.dim() } else { m };
    let project_from = (mode == CountMode::Pi2Image).then_some(m);
    if k == 0 || t == 0 {
        return invalid("need k >= 1 and T >= 1");
    }
    let ctx = Ctx {
        k,
        t: Integer::from(t),
        tol: z.tolerance,
        cands: Candidates { k, t, limits: &opts.limits, cells: Default::default() },
    };
    let mut audit = Audit::default();
    let mut all = Vec::new();
    for piece in z.set.pieces()? {
        let (f, a) = search_piece(&piece, restricted, &ctx, &opts.limits)?;
        audit.merge(a);
        all.extend(f);
    }
    let tuples = all.len();
    let projected: Vec<(Vec<Float>, Vec<String>)> = all
        .into_iter()
        .map(|f| match project_from {
            Some(m) => (f.values[m..].to_vec(), f.labels[m..].to_vec()),
            None => (f.values, f.labels),
        })
        .collect();
    let distinct = dedupe(projected, z.tolerance);
    Ok(CountResult {
        k,
        t,
        count: distinct.len(),
        mode,
        witnesses: opts.keep_witnesses.then(|| distinct.into_iter().map(|(_, l)| l).collect()),
        tuples,
        non_isolated_fibers: audit.non_isolated,
        min_margin: audit.min_margin,
        max_accepted_distance: audit.max_accepted,
        tolerance: z.tolerance,
        warnings: audit.warnings,
    })
}

/// `N(Z(k, T))`: points of `Z` all of whose coordinates have k-height `<= T`.
pub fn count_points(z: &DefinableSample, k: usize, t: u64) -> Result<CountResult> {
    count_points_with(z, k, t, &CountOptions::default())
}

pub fn count_points_with(z: &DefinableSample, k: usize, t: u64, opts: &CountOptions) -> Result<CountResult> {
    run(z, k, t, CountMode::Full, opts)
}

/// Points `(y, z)` of `Z` with `H_k(y_i) <= T` and `z` isolated in the fibre `Z_y`.
pub fn isolated_count(z: &DefinableSample, k: usize, t: u64) -> Result<CountResult> {
    count_with_mode(z, k, t, CountMode::Isolated, &CountOptions::default())
}

pub fn count_with_mode(z: &DefinableSample, k: usize, t: u64, mode: CountMode, opts: &CountOptions) -> Result<CountResult> {
    run(z, k, t, mode, opts)
}

/// `#pi_2(Sigma)`: distinct `z` with `(y, z) in Z`, `H_k(y_i) <= T` and `z` isolated in `Z_y`.
pub fn semi_rational_count(z: &DefinableSample, k: usize, t: u64) -> Result<CountResult> {
    semi_rational_count_with(z, k, t, &CountOptions::default())
}

pub fn semi_rational_count_with(z: &DefinableSample, k: usize, t: u64, opts: &CountOptions) -> Result<CountResult> {
    run(z, k, t, CountMode::Pi2Image, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(f: Expr, lo: i64, hi: i64) -> DefinableSample {
        DefinableSample::new(SetSpec::Graph { f, domain: Interval::new(lo, hi).unwrap() }).unwrap()
    }

    fn pow2() -> Expr {
        Expr::Pow(Box::new(Expr::constant(2)), Box::new(Expr::Var))
    }

    #[test]
    fn parabola_and_exponential() {
        let sq = graph(Expr::Pow(Box::new(Expr::Var), Box::new(Expr::constant(2))), 0, 1);
        assert_eq!(count_points(&sq, 1, 3).unwrap().count, 2);
        let e = graph(pow2(), 1, 2);
        for t in [4, 10, 37] {
            let r = count_points(&e, 1, t).unwrap();
            assert_eq!(r.count, 2, "T = {t}");
            assert!(r.min_margin.is_none());
        }
        assert_eq!(count_points(&e, 1, 3).unwrap().count, 1);
    }

    #[test]
    fn empty_set() {
        let z = DefinableSample::new(SetSpec::Empty { dim: 2 }).unwrap();
        assert_eq!(count_points(&z, 2, 5).unwrap().count, 0);
    }

    #[test]
    fn points_match_brute_force() {
        let pts = [vec!["1/2", "3"], vec!["7/3", "1"], vec!["1/2", "3"], vec!["-5", "2/9"]];
        let z = DefinableSample::new(SetSpec::Points {
            points: pts.iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect(),
        })
        .unwrap();
        for t in 1..12u64 {
            let brute = [(2, 3), (7, 3), (5, 9)].iter().filter(|(a, b)| *a.max(b) <= t).count();
            assert_eq!(count_points(&z, 1, t).unwrap().count, brute);
        }
    }

    #[test]
    fn diagonal_semi_rational() {
        let z = DefinableSample::new(SetSpec::Curve { coords: vec![Expr::Var, Expr::Var], param: Interval::unit() })
            .unwrap()
            .with_split(1, 1)
            .unwrap();
        let r = semi_rational_count(&z, 1, 3).unwrap();
        assert_eq!((r.count, r.mode), (5, CountMode::Pi2Image));
    }

    #[test]
    fn vertical_fibre_is_not_isolated() {
        let z = DefinableSample::new(SetSpec::Curve { coords: vec![Expr::constant(0), Expr::Var], param: Interval::unit() })
            .unwrap()
            .with_split(1, 1)
            .unwrap();
        let r = semi_rational_count(&z, 1, 5).unwrap();
        assert_eq!(r.count, 0);
        assert_eq!(r.non_isolated_fibers, 1);
        assert_eq!(isolated_count(&z, 1, 5).unwrap().count, 0);
        // with both coordinates restricted the points (0, p/q) are counted
        assert_eq!(count_points(&z, 1, 5).unwrap().count as u64, crate::counting::farey_count(5));
    }

    #[test]
    fn two_graphs_with_collisions() {
        // z = y and z = y + 1/2 over [0, 1]
        let shifted = Expr::Add(vec![Expr::Var, Expr::constant(Rational::from((1, 2)))]);
        let z = DefinableSample::new(SetSpec::Union {
            sets: vec![
                SetSpec::Graph { f: Expr::Var, domain: Interval::unit() },
                SetSpec::Graph { f: shifted, domain: Interval::unit() },
            ],
        })
        .unwrap()
        .with_split(1, 1)
        .unwrap();
        for t in [3u64, 6, 11] {
            // oracle over exact rationals
            let mut f = Vec::new();
            for q in 1..=t as i64 {
                for p in 0..=q {
                    if crate::algebraic::gcd_u64(p as u64, q as u64) == 1 {
                        f.push(Rational::from((p, q)));
                    }
                }
            }
            let r = semi_rational_count(&z, 1, t).unwrap();
            assert_eq!(isolated_count(&z, 1, t).unwrap().count, 2 * f.len());
            assert!(r.count <= r.tuples);
            let mut image: Vec<Rational> = f.iter().cloned().chain(f.iter().map(|x| x + Rational::from((1, 2)))).collect();
            image.sort();
            image.dedup();
            assert_eq!(r.count, image.len());
        }
    }

    #[test]
    fn non_parameter_driver() {
        // t -> (t^3, 2 t^3) on [0, 1]: points (y, 2y) with y in the Farey set, found by grid isolation
        let cube = Expr::Pow(Box::new(Expr::Var), Box::new(Expr::constant(3)));
        let z = DefinableSample::new(SetSpec::Curve {
            coords: vec![cube.clone(), Expr::Mul(vec![Expr::constant(2), cube])],
            param: Interval::unit(),
        })
        .unwrap();
        // 2y with max(|p|, q) <= 5 when y = p/q <= 1 and y's height <= 5
        let r = count_points_with(&z, 1, 5, &CountOptions { keep_witnesses: true, ..Default::default() }).unwrap();
        let mut brute = 0;
        for q in 1..=5i64 {
            for p in 0..=q {
                if crate::algebraic::gcd_u64(p as u64, q as u64) == 1 {
                    let two = Rational::from((2 * p, q));
                    if two.numer().clone().abs() <= 5 && *two.denom() <= 5 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(r.count, brute);
        let p = z.parametrize(0.3).unwrap();
        assert!(z.contains(&p));
    }

    #[test]
    fn monotone_in_t() {
        let z = graph(Expr::Div(Box::new(Expr::constant(1)), Box::new(Expr::Add(vec![Expr::Var, Expr::constant(1)]))), 0, 3);
        let mut last = 0;
        for t in 1..15 {
            let c = count_points(&z, 1, t).unwrap().count;
            assert!(c >= last);
            last = c;
        }
    }
}
