//! Small kernel vectors of an integer map (Siegel-type construction).

use rug::Float;

use super::lattice::{self, integer_kernel, GramForm};
use super::lll::{lll_reduce, DEFAULT_DELTA};
use super::matrix::{self, IntMatrix};
use super::minima::{successive_minima, DEFAULT_MAX_RANK};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug)]
pub struct KernelReport {
    pub vectors: IntMatrix,
    pub norms: Vec<Float>,
    pub product: Float,
    /// Frobenius norm of `phi`.
    pub phi_norm: Float,
    /// Rank of `phi`; the bound shape is `c * phi_norm^image_rank`.
    pub image_rank: usize,
    /// `product / phi_norm^image_rank`, the constant this instance needs.
    pub achieved_constant: Float,
}

/// Independent vectors spanning a finite-index sublattice of `ker phi`, with
/// small norm product. `phi` acts on column vectors of length `form.dim()`.
pub fn small_kernel_basis(phi: &IntMatrix, form: &GramForm) -> Result<KernelReport> {
    let n = form.dim();
    lattice::check_width(phi, n)?;
    if phi.is_empty() {
        return invalid("phi has no rows");
    }
    let ker = integer_kernel(phi, n);
    if ker.is_zero() {
        return Err(Error::Degenerate("phi has trivial kernel".into()));
    }
    // minima vectors give the least possible product; LLL above the enumeration bound
    let vectors = if ker.rank() <= DEFAULT_MAX_RANK {
        successive_minima(&ker, form)?.achieving_vectors
    } else {
        lll_reduce(&ker, form, DEFAULT_DELTA)?.basis
    };
    for v in &vectors {
        debug_assert!(matrix::is_zero_vec(&matrix::mul_vec(phi, v)));
    }
    let prec = form.prec();
    let norms: Vec<Float> = vectors.iter().map(|v| form.norm(v)).collect();
    let product = norms.iter().fold(Float::with_val(prec, 1), |a, b| a * b);
    let phi_norm = matrix::frobenius_norm(prec, phi);
    let image_rank = lattice::rank(phi);
    let shape = Float::with_val(prec, phi_norm.clone().pow_u(image_rank));
    let achieved_constant = Float::with_val(prec, &product / &shape);
    Ok(KernelReport { vectors, norms, product, phi_norm, image_rank, achieved_constant })
}

trait PowU {
    fn pow_u(self, e: usize) -> Float;
}

impl PowU for Float {
    fn pow_u(self, e: usize) -> Float {
        use rug::ops::Pow;
        self.pow(e as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::from_i64;

    #[test]
    fn projection_kernel() {
        let phi = from_i64(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        let r = small_kernel_basis(&phi, &GramForm::identity(4)).unwrap();
        assert_eq!(r.vectors, from_i64(&[vec![0, 0, 0, 1]]));
        assert_eq!(r.product.to_f64(), 1.0);
    }

    #[test]
    fn sum_map_kernel() {
        let r = small_kernel_basis(&from_i64(&[vec![1, 1]]), &GramForm::identity(2)).unwrap();
        assert_eq!(r.vectors.len(), 1);
        assert!((r.product.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn trivial_kernel_is_an_error() {
        let r = small_kernel_basis(&from_i64(&[vec![1, 0], vec![0, 1]]), &GramForm::identity(2));
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }
}
