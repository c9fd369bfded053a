//! Cosets of subtori, their constant-monomial lattices, and defects.

use rand::Rng;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::coord::{self, ScaledRoot};
use crate::algebraic::AlgebraicNumber;
use crate::error::{invalid, Error, Result};
use crate::linalg::lattice::IntegerLattice;
use crate::linalg::matrix::{self, IntMatrix};

/// An algebraic subgroup of `G_m^n` given by its relation lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub relations: IntegerLattice,
}

impl SubgroupSpec {
    pub fn ambient_dim(&self) -> usize {
        self.relations.ambient_dim()
    }

    pub fn is_connected(&self) -> bool {
        self.relations.is_saturated()
    }
}

pub fn subgroup_dim(s: &SubgroupSpec) -> usize {
    s.ambient_dim() - s.relations.rank()
}

/// `c * T` where `T` is the subtorus with cocharacter lattice `directions`.
#[derive(Clone, Debug)]
pub struct MonomialSubvariety {
    constants: Vec<AlgebraicNumber>,
    directions: IntegerLattice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub dim_a: usize,
    pub dim_special_closure: usize,
    pub dim_geodesic_closure: usize,
    pub delta: usize,
    pub delta_geo: usize,
    pub rank_l: usize,
    pub rank_m: usize,
}

impl MonomialSubvariety {
    /// Directions are replaced by their saturation (the same subtorus).
    pub fn new(constants: Vec<AlgebraicNumber>, directions: IntegerLattice) -> Result<Self> {
        if constants.len() != directions.ambient_dim() {
            return invalid(format!(
                "{} constants for a subtorus of G_m^{}",
                constants.len(),
                directions.ambient_dim()
            ));
        }
        if let Some(i) = constants.iter().position(|c| c.is_zero()) {
            return invalid(format!("coordinate {i} is zero, not a point of the torus"));
        }
        Ok(MonomialSubvariety { constants, directions: directions.saturation() })
    }

    pub fn point(constants: Vec<AlgebraicNumber>) -> Result<Self> {
        let n = constants.len();
        Self::new(constants, IntegerLattice::zero(n))
    }

    pub fn whole_torus(n: usize) -> Self {
        MonomialSubvariety {
            constants: (0..n).map(|_| AlgebraicNumber::from_integer(1)).collect(),
            directions: IntegerLattice::full(n),
        }
    }

    pub fn from_exact(constants: &[ScaledRoot], directions: IntegerLattice) -> Result<Self> {
        Self::new(constants.iter().map(|c| c.to_algebraic()).collect(), directions)
    }

    pub fn ambient_dim(&self) -> usize {
        self.directions.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.directions.rank()
    }

    pub fn constants(&self) -> &[AlgebraicNumber] {
        &self.constants
    }

    pub fn directions(&self) -> &IntegerLattice {
        &self.directions
    }

    pub fn exact_constants(&self) -> Result<Vec<ScaledRoot>> {
        self.constants
            .iter()
            .enumerate()
            .map(|(i, c)| {
                ScaledRoot::from_algebraic(c).map_err(|_| {
                    Error::Unsupported(format!(
                        "coordinate {i} ({c}) is not a rational times a root of unity"
                    ))
                })
            })
            .collect()
    }
}

/// `L = {a : x^a constant on v}` and `M = {a in L : x^a a root of unity on v}`.
pub fn constant_monomial_lattices(v: &MonomialSubvariety) -> Result<(IntegerLattice, IntegerLattice)> {
    let c = v.exact_constants()?;
    let l = v.directions.orthogonal_complement();
    let m = l.kernel_of(&coord::modulus_exponent_matrix(&c));
    debug_assert!(m.is_sublattice_of(&l));
    Ok((l, m))
}

pub fn defect_report(v: &MonomialSubvariety) -> Result<DefectReport> {
    let (l, m) = constant_monomial_lattices(v)?;
    let n = v.ambient_dim();
    let dim_a = v.dim();
    let dim_special_closure = n - m.rank();
    let dim_geodesic_closure = n - l.rank();
    Ok(DefectReport {
        dim_a,
        dim_special_closure,
        dim_geodesic_closure,
        delta: dim_special_closure - dim_a,
        delta_geo: dim_geodesic_closure - dim_a,
        rank_l: l.rank(),
        rank_m: m.rank(),
    })
}

/// Exact test of `a ⊆ b`.
pub fn contains(b: &MonomialSubvariety, a: &MonomialSubvariety) -> Result<bool> {
    if a.ambient_dim() != b.ambient_dim() {
        return Ok(false);
    }
    if !a.directions.is_sublattice_of(&b.directions) {
        return Ok(false);
    }
    // c_a / c_b must lie in T_b: every character of L_b kills it
    let ca = a.exact_constants()?;
    let cb = b.exact_constants()?;
    let ratio: Vec<ScaledRoot> = ca.iter().zip(&cb).map(|(x, y)| x.mul(&y.inv())).collect();
    let lb = b.directions.orthogonal_complement();
    Ok(lb.basis().iter().all(|chi| coord::monomial_value(&ratio, chi).is_one()))
}

/// `delta(B) - delta_geo(B) <= delta(A) - delta_geo(A)` for `A ⊆ B`.
pub fn defect_condition_check(a: &MonomialSubvariety, b: &MonomialSubvariety) -> Result<bool> {
    if !contains(b, a)? {
        return Err(Error::NotContained("first argument is not contained in the second".into()));
    }
    let ra = defect_report(a)?;
    let rb = defect_report(b)?;
    Ok(rb.delta as i64 - rb.delta_geo as i64 <= ra.delta as i64 - ra.delta_geo as i64)
}

/// The smallest torsion coset containing the point `p`.
pub fn smallest_special(p: &[AlgebraicNumber]) -> Result<MonomialSubvariety> {
    let c: Vec<ScaledRoot> = p
        .iter()
        .enumerate()
        .map(|(i, x)| {
            ScaledRoot::from_algebraic(x).map_err(|_| {
                Error::Unsupported(format!("coordinate {i} ({x}) is not a rational times a root of unity"))
            })
        })
        .collect::<Result<_>>()?;
    let m = coord::root_of_unity_relations(&c);
    MonomialSubvariety::new(p.to_vec(), m.orthogonal_complement())
}

/// A random `A ⊆ B` pair in `G_m^n` with exact constants.
pub fn random_nested_pair<R: Rng>(rng: &mut R, n: usize) -> (MonomialSubvariety, MonomialSubvariety) {
    let rank_b = rng.random_range(0..=n);
    let dirs_b = random_lattice(rng, n, rank_b);
    let rank_a = rng.random_range(0..=dirs_b.rank());
    // A's directions: random integer combinations of B's basis
    let gens_a: IntMatrix = (0..rank_a)
        .map(|_| {
            let mut v = vec![Integer::new(); n];
            for row in dirs_b.basis() {
                let c = Integer::from(rng.random_range(-3i64..=3));
                matrix::axpy(&mut v, &c, row);
            }
            v
        })
        .collect();
    let dirs_a = IntegerLattice::new(n, gens_a).unwrap();
    let cb: Vec<ScaledRoot> = (0..n).map(|_| random_coord(rng)).collect();
    // translate by a point of T_b: t_i = prod_j s_j^{d_ji}
    let s: Vec<ScaledRoot> = dirs_b.basis().iter().map(|_| random_coord(rng)).collect();
    let ca: Vec<ScaledRoot> = (0..n)
        .map(|i| {
            dirs_b
                .basis()
                .iter()
                .zip(&s)
                .fold(cb[i].clone(), |acc, (d, sj)| acc.mul(&sj.pow(&d[i])))
        })
        .collect();
    let b = MonomialSubvariety::from_exact(&cb, dirs_b).unwrap();
    let a = MonomialSubvariety::from_exact(&ca, dirs_a).unwrap();
    (a, b)
}

fn random_lattice<R: Rng>(rng: &mut R, n: usize, rank: usize) -> IntegerLattice {
    loop {
        let gens: IntMatrix = (0..rank)
            .map(|_| (0..n).map(|_| Integer::from(rng.random_range(-3i64..=3))).collect())
            .collect();
        let l = IntegerLattice::new(n, gens).unwrap();
        if l.rank() == rank {
            return l;
        }
    }
}

/// Small rationals (often `1`) times roots of unity of order dividing 12.
fn random_coord<R: Rng>(rng: &mut R) -> ScaledRoot {
    const MODULI: [(i64, i64); 8] = [(1, 1), (1, 1), (1, 1), (2, 1), (3, 1), (1, 2), (4, 3), (6, 1)];
    let (p, q) = MODULI[rng.random_range(0..MODULI.len())];
    let k = rng.random_range(0..12);
    ScaledRoot::new(Rational::from((p, q)), Rational::from((k, 12))).unwrap()
}
