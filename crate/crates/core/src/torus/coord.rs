//! Exact torus coordinates of the form `r * exp(2 pi i theta)` with `r > 0`
//! and `theta` rational, and their multiplicative relations.

use rug::{Integer, Rational};

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::linalg::lattice::{integer_kernel, IntegerLattice};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledRoot {
    pub modulus: Rational,
    /// Angle in turns, reduced into `[0, 1)`.
    pub turns: Rational,
}

fn reduce_turns(t: Rational) -> Rational {
    let f = t.clone().floor();
    t - f
}

impl ScaledRoot {
    pub fn new(modulus: Rational, turns: Rational) -> Result<Self> {
        if modulus <= 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        Ok(ScaledRoot { modulus, turns: reduce_turns(turns) })
    }

    pub fn one() -> Self {
        ScaledRoot { modulus: Rational::from(1), turns: Rational::new() }
    }

    pub fn from_rational(q: &Rational) -> Result<Self> {
        if *q == 0 {
            return Err(Error::Unsupported("0 is not a point of the torus".into()));
        }
        let turns = if *q < 0 { Rational::from((1, 2)) } else { Rational::new() };
        Ok(ScaledRoot { modulus: q.clone().abs(), turns })
    }

    pub fn root_of_unity(m: u64, k: i64) -> Self {
        ScaledRoot {
            modulus: Rational::from(1),
            turns: reduce_turns(Rational::from((Integer::from(k), Integer::from(m)))),
        }
    }

    pub fn from_algebraic(a: &AlgebraicNumber) -> Result<Self> {
        match a.as_scaled_root_of_unity() {
            Some(s) => Ok(ScaledRoot {
                modulus: s.modulus,
                turns: Rational::from((Integer::from(s.exponent), Integer::from(s.order))),
            }),
            None => Err(Error::Unsupported(format!(
                "{a} is not a rational number times a root of unity"
            ))),
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        let m = self.turns.denom().to_u64().expect("root of unity order fits in u64");
        let k = self.turns.numer().to_i64().expect("exponent fits in i64");
        AlgebraicNumber::scaled_root_of_unity(&self.modulus, m, k).expect("nonzero modulus")
    }

    pub fn mul(&self, o: &ScaledRoot) -> ScaledRoot {
        ScaledRoot {
            modulus: Rational::from(&self.modulus * &o.modulus),
            turns: reduce_turns(Rational::from(&self.turns + &o.turns)),
        }
    }

    pub fn inv(&self) -> ScaledRoot {
        ScaledRoot {
            modulus: self.modulus.clone().recip(),
            turns: reduce_turns(Rational::from(-&self.turns)),
        }
    }

    pub fn pow(&self, e: &Integer) -> ScaledRoot {
        let k = e.to_i32().expect("exponent fits in i32");
        use rug::ops::Pow;
        let modulus = self.modulus.clone().pow(k);
        ScaledRoot { modulus, turns: reduce_turns(Rational::from(&self.turns * e)) }
    }

    pub fn is_one(&self) -> bool {
        self.modulus == 1 && self.turns == 0
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.modulus == 1
    }

    /// Order of the root-of-unity part.
    pub fn order(&self) -> u64 {
        self.turns.denom().to_u64().unwrap_or(0)
    }
}

/// `prod x_i^{a_i}` for exact coordinates.
pub fn monomial_value(x: &[ScaledRoot], a: &[Integer]) -> ScaledRoot {
    x.iter().zip(a).fold(ScaledRoot::one(), |acc, (xi, ai)| acc.mul(&xi.pow(ai)))
}

/// Pairwise coprime integers `> 1` that multiplicatively generate all inputs.
pub fn coprime_base(inputs: &[Integer]) -> Vec<Integer> {
    let mut base: Vec<Integer> = inputs.iter().map(|x| x.clone().abs()).filter(|x| *x > 1).collect();
    loop {
        base.sort();
        base.dedup();
        let mut changed = false;
        'scan: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].clone().gcd(&base[j]);
                if g > 1 {
                    let a = Integer::from(base[i].div_exact_ref(&g));
                    let b = Integer::from(base[j].div_exact_ref(&g));
                    let mut next: Vec<Integer> =
                        base.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| v.clone()).collect();
                    next.extend([a, b, g].into_iter().filter(|v| *v > 1));
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

/// Exponent vector of a positive rational over a coprime base.
pub fn exponents_over(base: &[Integer], q: &Rational) -> Vec<Integer> {
    let mut out = vec![Integer::new(); base.len()];
    for (part, sign) in [(q.numer().clone(), 1i32), (q.denom().clone(), -1)] {
        let mut rest = part.abs();
        for (k, b) in base.iter().enumerate() {
            while rest.is_divisible(b) {
                rest = Integer::from(rest.div_exact_ref(b));
                out[k] += sign;
            }
        }
        debug_assert_eq!(rest, 1, "coprime base does not cover the input");
    }
    out
}

/// Matrix `E` (base x n) with `|x^a| = 1` iff `E a = 0`.
pub fn modulus_exponent_matrix(x: &[ScaledRoot]) -> IntMatrix {
    let mut ints = Vec::new();
    for c in x {
        ints.push(c.modulus.numer().clone());
        ints.push(c.modulus.denom().clone());
    }
    let base = coprime_base(&ints);
    let cols: Vec<Vec<Integer>> = x.iter().map(|c| exponents_over(&base, &c.modulus)).collect();
    (0..base.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// `{a : x^a is a root of unity}` (saturated).
pub fn root_of_unity_relations(x: &[ScaledRoot]) -> IntegerLattice {
    let e = modulus_exponent_matrix(x);
    integer_kernel(&e, x.len())
}

/// `{a : x^a = 1}` (not saturated in general).
pub fn exact_relations(x: &[ScaledRoot]) -> IntegerLattice {
    let n = x.len();
    let rou = root_of_unity_relations(x);
    if rou.is_zero() {
        return rou;
    }
    // on the root-of-unity lattice, a -> sum a_i theta_i mod 1 is a homomorphism to Q/Z;
    // with common denominator D it becomes a -> sum a_i (D theta_i) mod D
    let d = x.iter().fold(Integer::from(1), |acc, c| acc.lcm(c.turns.denom()));
    let w: Vec<Integer> = x
        .iter()
        .map(|c| Integer::from(&d * c.turns.numer()).div_exact(c.turns.denom()))
        .collect();
    // kernel of b -> (sum_j b_j <basis_j, w>) mod d, via an extra slack coordinate
    let basis = rou.basis();
    let k = basis.len();
    let row: Vec<Integer> = basis
        .iter()
        .map(|b| b.iter().zip(&w).fold(Integer::new(), |s, (x, y)| s + Integer::from(x * y)))
        .chain(std::iter::once(d.clone()))
        .collect();
    let ker = integer_kernel(&vec![row], k + 1);
    let gens: IntMatrix = ker
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![Integer::new(); n];
            for (cj, bj) in c.iter().take(k).zip(basis) {
                for (vi, bi) in v.iter_mut().zip(bj) {
                    *vi += Integer::from(cj * bi);
                }
            }
            v
        })
        .collect();
    IntegerLattice::new(n, gens).expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn coprime_base_refines() {
        let b = coprime_base(&[Integer::from(12), Integer::from(18), Integer::from(5)]);
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                assert_eq!(b[i].clone().gcd(&b[j]), 1);
            }
        }
        for v in [12, 18, 5] {
            let e = exponents_over(&b, &Rational::from(v));
            let back = b.iter().zip(&e).fold(Rational::from(1), |acc, (bi, ei)| {
                use rug::ops::Pow;
                acc * Rational::from(bi).pow(ei.to_i32().unwrap())
            });
            assert_eq!(back, v);
        }
    }

    #[test]
    fn relations_of_two_and_four() {
        let x = [ScaledRoot::from_rational(&q(2, 1)).unwrap(), ScaledRoot::from_rational(&q(4, 1)).unwrap()];
        let r = root_of_unity_relations(&x);
        assert_eq!(r, IntegerLattice::from_i64(2, &[vec![2, -1]]).unwrap());
        let x = [ScaledRoot::from_rational(&q(2, 1)).unwrap(), ScaledRoot::from_rational(&q(3, 1)).unwrap()];
        assert!(root_of_unity_relations(&x).is_zero());
    }

    #[test]
    fn exact_relations_of_torsion() {
        let z = ScaledRoot::root_of_unity(6, 1);
        let r = exact_relations(&[z.clone(), z.inv()]);
        // a1 - a2 = 0 mod 6
        assert_eq!(r, IntegerLattice::from_i64(2, &[vec![1, 1], vec![0, 6]]).unwrap());
        let m = exact_relations(&[ScaledRoot::from_rational(&q(-2, 1)).unwrap(), ScaledRoot::from_rational(&q(2, 1)).unwrap()]);
        // (-2)^a (2)^b = 1 iff a + b = 0 and a even
        assert_eq!(m, IntegerLattice::from_i64(2, &[vec![2, -2]]).unwrap());
    }

    #[test]
    fn algebraic_round_trip() {
        let s = ScaledRoot::new(q(3, 2), q(5, 6)).unwrap();
        let a = s.to_algebraic();
        assert_eq!(ScaledRoot::from_algebraic(&a).unwrap(), s);
    }
}
