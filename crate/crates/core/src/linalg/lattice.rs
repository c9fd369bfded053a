use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use super::hnf::{hnf, snf};
use super::matrix::{self, cols, IntMatrix};
use super::real::{self, RealMatrix};
use crate::error::{invalid, Error, Result};
use crate::numeric::{IntExt, DEFAULT_PRECISION};

/// A subgroup of `Z^n` stored by its row Hermite normal form basis.
///
/// Two lattices are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct IntegerLattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl IntegerLattice {
    /// The lattice generated by `generators` (rows; need not be independent).
    pub fn new(ambient_dim: usize, generators: IntMatrix) -> Result<Self> {
        if ambient_dim == 0 {
            return invalid("ambient dimension must be positive");
        }
        if let Some(bad) = generators.iter().find(|r| r.len() != ambient_dim) {
            return invalid(format!(
                "generator of length {} in ambient dimension {ambient_dim}",
                bad.len()
            ));
        }
        let (h, _) = hnf(&generators);
        let basis = h.into_iter().filter(|r| !matrix::is_zero_vec(r)).collect();
        Ok(IntegerLattice { ambient_dim, basis })
    }

    pub fn from_i64(ambient_dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(ambient_dim, matrix::from_i64(generators))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        IntegerLattice { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        IntegerLattice { ambient_dim, basis: matrix::identity(ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains(&self, v: &[Integer]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut w = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).unwrap();
            if w[..p].iter().any(|x| !x.is_zero()) {
                return false;
            }
            if !w[p].is_divisible(&row[p]) {
                return false;
            }
            let q = Integer::from(w[p].div_exact_ref(&row[p]));
            matrix::axpy(&mut w, &(-q), row);
        }
        matrix::is_zero_vec(&w)
    }

    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        IntegerLattice::new(self.ambient_dim, gens)
    }

    /// `(L ⊗ Q) ∩ Z^n`, read off from the Smith form.
    pub fn saturation(&self) -> IntegerLattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let (diag, _, right) = snf(&self.basis);
        let r = diag.iter().filter(|d| !d.is_zero()).count();
        // rows of right^{-1}; inverse of a unimodular matrix via HNF of [right | I]
        let inv = unimodular_inverse(&right);
        IntegerLattice::new(self.ambient_dim, inv[..r].to_vec()).expect("dimensions agree")
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }

    /// `{x in Z^n : <x, b> = 0 for all basis vectors b}` (always saturated).
    pub fn orthogonal_complement(&self) -> IntegerLattice {
        if self.basis.is_empty() {
            return IntegerLattice::full(self.ambient_dim);
        }
        integer_kernel(&self.basis, self.ambient_dim)
    }

    /// Sublattice `{v in L : c * v = 0}` for a constraint matrix `c` acting on column vectors.
    pub fn kernel_of(&self, constraints: &IntMatrix) -> IntegerLattice {
        if self.basis.is_empty() || constraints.is_empty() {
            return self.clone();
        }
        // v = y B, need c B^T y^T = 0
        let cb = matrix::mul(constraints, &matrix::transpose(&self.basis));
        let ys = integer_kernel(&cb, self.rank());
        let gens = matrix::mul(ys.basis(), &self.basis);
        IntegerLattice::new(self.ambient_dim, gens).expect("dimensions agree")
    }

    /// Rank of `self / sub` for a sublattice `sub`.
    pub fn quotient_rank(&self, sub: &IntegerLattice) -> usize {
        self.rank() - sub.rank()
    }
}

/// Saturated integer kernel `{x in Z^n : a x = 0}` of an `m x n` matrix.
pub fn integer_kernel(a: &IntMatrix, n: usize) -> IntegerLattice {
    if a.is_empty() {
        return IntegerLattice::full(n);
    }
    let (h, u) = hnf(&matrix::transpose(a));
    let gens: IntMatrix = h
        .iter()
        .zip(u)
        .filter(|(row, _)| matrix::is_zero_vec(row))
        .map(|(_, urow)| urow)
        .collect();
    IntegerLattice::new(n, gens).expect("kernel vectors have the ambient length")
}

/// Integer rank of a matrix.
pub fn rank(a: &IntMatrix) -> usize {
    let (h, _) = hnf(a);
    h.iter().filter(|r| !matrix::is_zero_vec(r)).count()
}

pub fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let n = u.len();
    let aug: IntMatrix = u
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Integer::from((i == j) as i32)));
            r
        })
        .collect();
    let (h, _) = hnf(&aug);
    h.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    ambient_dim: usize,
    basis: Vec<Vec<serde_json::Value>>,
}

pub(crate) fn int_to_json(x: &Integer) -> serde_json::Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() < (1u64 << 53) => serde_json::Value::from(v),
        _ => serde_json::Value::String(x.to_string()),
    }
}

pub(crate) fn int_from_json(v: &serde_json::Value) -> Result<Integer> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(Integer::from)
            .ok_or_else(|| Error::InvalidInput(format!("non-integer entry {n}"))),
        serde_json::Value::String(s) => s
            .trim()
            .parse::<Integer>()
            .map_err(|_| Error::InvalidInput(format!("non-integer entry {s:?}"))),
        other => invalid(format!("non-integer entry {other}")),
    }
}

pub(crate) fn matrix_to_json(m: &IntMatrix) -> Vec<Vec<serde_json::Value>> {
    m.iter().map(|r| r.iter().map(int_to_json).collect()).collect()
}

pub(crate) fn matrix_from_json(m: &[Vec<serde_json::Value>]) -> Result<IntMatrix> {
    m.iter()
        .map(|r| r.iter().map(int_from_json).collect::<Result<Vec<_>>>())
        .collect()
}

impl TryFrom<LatticeJson> for IntegerLattice {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Self> {
        IntegerLattice::new(j.ambient_dim, matrix_from_json(&j.basis)?)
    }
}

impl From<IntegerLattice> for LatticeJson {
    fn from(l: IntegerLattice) -> Self {
        LatticeJson { ambient_dim: l.ambient_dim, basis: matrix_to_json(&l.basis) }
    }
}

/// A positive-definite symmetric real matrix used as an inner product on `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramForm {
    matrix: RealMatrix,
}

impl GramForm {
    /// Checks symmetry (relative tolerance `1e-20`) and positive definiteness.
    pub fn new(matrix: RealMatrix) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPolarization("Gram matrix must be square and nonempty".into()));
        }
        for i in 0..n {
            for j in 0..i {
                let d = Float::with_val(64, &matrix[i][j] - &matrix[j][i]).abs().to_f64();
                let s = matrix[i][j].to_f64().abs().max(matrix[j][i].to_f64().abs()).max(1.0);
                if d > 1e-20 * s {
                    return Err(Error::InvalidPolarization(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        if real::cholesky(&matrix).is_none() {
            return Err(Error::InvalidPolarization("Gram matrix is not positive definite".into()));
        }
        Ok(GramForm { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self::identity_with_prec(n, DEFAULT_PRECISION)
    }

    pub fn identity_with_prec(n: usize, prec: u32) -> Self {
        GramForm { matrix: real::identity(prec, n) }
    }

    pub fn from_f64(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(real::from_f64(DEFAULT_PRECISION, rows))
    }

    /// Gram form of a real basis: entries `<v_i, v_j>` in the standard inner product.
    pub fn from_real_basis(vectors: &RealMatrix) -> Result<Self> {
        Self::new(real::mul(vectors, &real::transpose(vectors)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn prec(&self) -> u32 {
        real::prec_of(&self.matrix)
    }

    pub fn scaled(&self, s: f64) -> Self {
        GramForm {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|x| Float::with_val(x.prec(), x * s)).collect())
                .collect(),
        }
    }

    pub fn inner(&self, u: &[Integer], v: &[Integer]) -> Float {
        let p = self.prec();
        let mut acc = Float::new(p);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = Float::new(p);
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    row += Float::with_val(p, &self.matrix[i][j] * vj);
                }
            }
            acc += row * ui;
        }
        acc
    }

    pub fn inner_real(&self, u: &[Float], v: &[Float]) -> Float {
        let p = self.prec();
        let gv = real::mul_vec(&self.matrix, v);
        u.iter().zip(&gv).fold(Float::new(p), |acc, (a, b)| acc + Float::with_val(p, a * b))
    }

    pub fn norm(&self, v: &[Integer]) -> Float {
        self.inner(v, v).sqrt()
    }

    /// Gram matrix `B G B^T` of the given integer vectors.
    pub fn gram_of(&self, rows: &IntMatrix) -> RealMatrix {
        let p = self.prec();
        let fl: Vec<Vec<Float>> = rows.iter().map(|r| matrix::to_float(p, r)).collect();
        let gb: Vec<Vec<Float>> = fl.iter().map(|r| real::mul_vec(&self.matrix, r)).collect();
        let n = rows.len();
        let mut out = real::zeros(p, n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = fl[i]
                    .iter()
                    .zip(&gb[j])
                    .fold(Float::new(p), |acc, (a, b)| acc + Float::with_val(p, a * b));
                out[j][i] = v.clone();
                out[i][j] = v;
            }
        }
        out
    }
}

/// `|det <b_i, b_j>|^(1/2)` for the stored basis.
pub fn lattice_volume(lat: &IntegerLattice, form: &GramForm) -> Result<Float> {
    if form.dim() != lat.ambient_dim() {
        return invalid(format!(
            "form dimension {} differs from lattice ambient dimension {}",
            form.dim(),
            lat.ambient_dim()
        ));
    }
    if lat.rank() == 0 {
        return Ok(Float::with_val(form.prec(), 1));
    }
    let g = form.gram_of(lat.basis());
    if real::cholesky(&g).is_none() {
        return Err(Error::InvalidPolarization(
            "form is not positive definite on the lattice".into(),
        ));
    }
    Ok(real::det(&g).abs().sqrt())
}

/// Checks the column count of a generator matrix against an ambient dimension.
pub fn check_width(m: &IntMatrix, n: usize) -> Result<()> {
    if !m.is_empty() && cols(m) != n {
        return invalid(format!("matrix has {} columns, expected {n}", cols(m)));
    }
    Ok(())
}
