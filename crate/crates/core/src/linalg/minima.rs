//! Successive minima by bounded enumeration after LLL.

use rug::{Float, Integer};
use serde::Serialize;

use super::lattice::{self, lattice_volume, GramForm, IntegerLattice};
use super::lll::{lll_reduce, DEFAULT_DELTA};
use super::matrix::{self, IntMatrix};
use crate::error::{Error, Result};
use crate::numeric;

pub const DEFAULT_MAX_RANK: usize = 10;
const NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub struct MinimaReport {
    pub minima: Vec<Float>,
    pub achieving_vectors: IntMatrix,
    pub volume: Float,
}

impl MinimaReport {
    pub fn rank(&self) -> usize {
        self.minima.len()
    }

    pub fn product(&self) -> Float {
        let p = self.volume.prec();
        self.minima.iter().fold(Float::with_val(p, 1), |acc, m| acc * m)
    }

    /// `2^r vol / mu(r)`.
    pub fn minkowski_bound(&self) -> Float {
        minkowski_bound(self.rank(), &self.volume)
    }

    pub fn satisfies_minkowski(&self) -> bool {
        self.product() <= self.minkowski_bound()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct J {
            minima: Vec<String>,
            achieving_vectors: Vec<Vec<serde_json::Value>>,
            volume: String,
            product: String,
            minkowski_bound: String,
        }
        serde_json::to_value(J {
            minima: self.minima.iter().map(|m| numeric::fmt_real(m, 25)).collect(),
            achieving_vectors: lattice::matrix_to_json(&self.achieving_vectors),
            volume: numeric::fmt_real(&self.volume, 25),
            product: numeric::fmt_real(&self.product(), 25),
            minkowski_bound: numeric::fmt_real(&self.minkowski_bound(), 25),
        })
        .expect("plain data")
    }
}

pub fn minkowski_bound(r: usize, volume: &Float) -> Float {
    let p = volume.prec();
    let two_r = Float::with_val(p, Float::u_pow_u(2, r as u32));
    two_r * volume / numeric::unit_ball_volume(p, r as u32)
}

pub fn successive_minima(lat: &IntegerLattice, form: &GramForm) -> Result<MinimaReport> {
    successive_minima_bounded(lat, form, DEFAULT_MAX_RANK)
}

pub fn successive_minima_bounded(
    lat: &IntegerLattice,
    form: &GramForm,
    max_rank: usize,
) -> Result<MinimaReport> {
    let r = lat.rank();
    if r > max_rank {
        return Err(Error::ResourceBound {
            what: "successive minima rank".into(),
            limit: max_rank as u64,
            hint: "use lll_reduce for approximate short vectors at this rank".into(),
        });
    }
    let volume = lattice_volume(lat, form)?;
    if r == 0 {
        return Ok(MinimaReport { minima: vec![], achieving_vectors: vec![], volume });
    }
    let red = lll_reduce(lat, form, DEFAULT_DELTA)?;
    let b = &red.basis;
    let gram = form.gram_of(b);
    let g64: Vec<Vec<f64>> = gram.iter().map(|row| row.iter().map(|x| x.to_f64()).collect()).collect();
    let prec = form.prec();

    let mut chosen: IntMatrix = Vec::new(); // coefficient vectors
    let mut minima = Vec::new();
    let mut vectors = Vec::new();
    for _ in 0..r {
        // an upper bound: the shortest reduced basis vector outside the current span
        let mut radius2 = f64::MAX;
        for (i, row) in g64.iter().enumerate() {
            let mut e = vec![Integer::new(); r];
            e[i] = Integer::from(1);
            if independent(&chosen, &e) {
                radius2 = radius2.min(row[i]);
            }
        }
        let radius2 = radius2 * (1.0 + 1e-9) + 1e-12;
        let mut cands = enumerate(&g64, radius2)?;
        let mut scored: Vec<(Float, IntMatrix)> = Vec::new();
        cands.retain(|x| independent(&chosen, x));
        for x in cands {
            let v = coeffs_to_vector(&x, b);
            let n = form.norm(&v);
            scored.push((n, vec![v, x]));
        }
        scored.sort_by(|a, c| {
            a.0.partial_cmp(&c.0).unwrap().then_with(|| a.1[0].cmp(&c.1[0]))
        });
        let Some((n, vx)) = scored.into_iter().next() else {
            return Err(Error::Precision("enumeration missed a basis vector".into()));
        };
        chosen.push(vx[1].clone());
        vectors.push(vx[0].clone());
        minima.push(Float::with_val(prec, n));
    }
    Ok(MinimaReport { minima, achieving_vectors: vectors, volume })
}

fn coeffs_to_vector(x: &[Integer], b: &IntMatrix) -> Vec<Integer> {
    let mut v = vec![Integer::new(); matrix::cols(b)];
    for (c, row) in x.iter().zip(b) {
        matrix::axpy(&mut v, c, row);
    }
    v
}

fn independent(chosen: &IntMatrix, x: &[Integer]) -> bool {
    let mut m = chosen.clone();
    m.push(x.to_vec());
    lattice::rank(&m) == m.len()
}

/// All nonzero `x` (one per sign pair) with `x^T G x <= radius2`, Fincke–Pohst style.
pub fn enumerate(g: &[Vec<f64>], radius2: f64) -> Result<IntMatrix> {
    let n = g.len();
    // q_ii and q_ij with Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[i][j];
        }
    }
    for i in 0..n {
        if q[i][i] <= 0.0 {
            return Err(Error::Degenerate("Gram matrix is not positive definite".into()));
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut nodes = 0u64;
    recurse(&q, n, n - 1, radius2, &mut x, &mut out, &mut nodes)?;
    Ok(out)
}

fn recurse(
    q: &[Vec<f64>],
    n: usize,
    i: usize,
    remaining: f64,
    x: &mut Vec<i64>,
    out: &mut IntMatrix,
    nodes: &mut u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(Error::ResourceBound {
            what: "enumeration nodes".into(),
            limit: NODE_BUDGET,
            hint: "lattice too skewed for exact minima; reduce dimension".into(),
        });
    }
    let c: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let w = (remaining / q[i][i]).max(0.0).sqrt();
    let lo = (c - w).ceil() as i64;
    let hi = (c + w).floor() as i64;
    for v in lo..=hi {
        let t = v as f64 - c;
        let rest = remaining - q[i][i] * t * t;
        if rest < -1e-12 * remaining.abs().max(1.0) {
            continue;
        }
        x[i] = v;
        if i == 0 {
            // keep one of +-x: last nonzero coordinate positive
            if let Some(p) = x.iter().rposition(|&y| y != 0) {
                if x[p] > 0 {
                    out.push(x.iter().map(|&y| Integer::from(y)).collect());
                }
            }
        } else {
            recurse(q, n, i - 1, rest.max(0.0), x, out, nodes)?;
        }
    }
    x[i] = 0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mins(rows: &[Vec<i64>]) -> Vec<f64> {
        let n = rows[0].len();
        let lat = IntegerLattice::from_i64(n, rows).unwrap();
        successive_minima(&lat, &GramForm::identity(n))
            .unwrap()
            .minima
            .iter()
            .map(|m| m.to_f64())
            .collect()
    }

    #[test]
    fn simple_minima() {
        assert_eq!(mins(&[vec![1, 0], vec![0, 1]]), vec![1.0, 1.0]);
        assert_eq!(mins(&[vec![1, 0], vec![0, 5]]), vec![1.0, 5.0]);
    }

    #[test]
    fn rank_bound_refused() {
        let lat = IntegerLattice::full(11);
        let r = successive_minima(&lat, &GramForm::identity(11));
        assert!(matches!(r, Err(Error::ResourceBound { .. })));
    }

    #[test]
    fn matches_brute_force_in_a_box() {
        // oracle: brute-force lambda_1 over a coefficient box
        let rows = vec![vec![3, 1, 0], vec![1, 4, 1], vec![0, 2, 7]];
        let m = mins(&rows);
        let mut best = f64::MAX;
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    if (a, b, c) == (0, 0, 0) {
                        continue;
                    }
                    let v: Vec<f64> = (0..3)
                        .map(|j| (a * rows[0][j] + b * rows[1][j] + c * rows[2][j]) as f64)
                        .collect();
                    best = best.min(v.iter().map(|x| x * x).sum::<f64>().sqrt());
                }
            }
        }
        assert!((m[0] - best).abs() < 1e-12);
        assert!(m.windows(2).all(|w| w[0] <= w[1]));
    }
}
