//! Exact lattice toolkit: Hermite and Smith normal forms, LLL, successive minima, small kernels.

use zpkit::linalg::{hnf, lll_reduce, matrix, small_kernel_basis, snf, successive_minima, GramForm, IntegerLattice};

fn main() -> zpkit::Result<()> {
    let m = matrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let (h, _) = hnf(&m);
    let (d, _, _) = snf(&m);
    println!("HNF rows: {:?}", matrix::to_i64(&h).unwrap());
    println!("elementary divisors: {}", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));

    let lat = IntegerLattice::from_i64(3, &[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]])?;
    let form = GramForm::identity(3);
    let r = lll_reduce(&lat, &form, 0.99)?;
    println!("LLL basis: {:?}", matrix::to_i64(&r.basis).unwrap());

    let m = successive_minima(&lat, &form)?;
    let minima: Vec<f64> = m.minima.iter().map(|x| x.to_f64()).collect();
    println!("successive minima {minima:?}");
    println!("product {:.4} <= Minkowski bound {:.4}", m.product().to_f64(), m.minkowski_bound().to_f64());

    // Siegel-type: small integer vectors killed by an integer map
    let phi = matrix::from_i64(&[vec![3, -7, 11, 2]]);
    let k = small_kernel_basis(&phi, &GramForm::identity(4))?;
    println!("kernel vectors of [3 -7 11 2]: {:?}", matrix::to_i64(&k.vectors).unwrap());
    println!("achieved constant {:.4}", k.achieved_constant.to_f64());
    Ok(())
}
