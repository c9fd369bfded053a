//! Polarized tori from period data: degrees, comparability, small periods and nearby periods.

use zpkit::abelian::{degree, degree_comparability, nearby_period, small_period_basis, PolarizedTorus, Subtorus};
use zpkit::numeric::Complex;

fn main() -> zpkit::Result<()> {
    let p = 128;
    let e1 = PolarizedTorus::elliptic(&Complex::from_f64(p, 0.0, 1.0))?;
    let e2 = PolarizedTorus::elliptic(&Complex::from_f64(p, 0.3, 1.4))?;
    let x = e1.product(&e2)?;
    println!("deg E1 = {:.9}, deg E1 x E2 = {:.9}", degree(&e1.full())?.to_f64(), degree(&x.full())?.to_f64());

    // factor E1 x 0
    let y = Subtorus::from_i64(&x, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]])?;
    println!("deg (E1 x 0) = {:.9}", degree(&y)?.to_f64());

    let two = zpkit::numeric::real(p, 2.0);
    let h2: Vec<Vec<Complex>> = x.hermitian().iter().map(|r| r.iter().map(|z| z.scale(&two)).collect()).collect();
    let c = degree_comparability(&x.full(), &h2)?;
    println!("deg_2H / deg_H = {}", c.ratio_low);

    let b = small_period_basis(&x.full())?;
    println!(
        "small periods: product {:.4}, Hadamard {}, Minkowski {}",
        b.product.to_f64(),
        b.satisfies_hadamard(),
        b.satisfies_minkowski()
    );

    let z = vec![Complex::from_f64(p, 2.3, 0.4), Complex::from_f64(p, -0.1, 0.2)];
    let n = nearby_period(&z, &x.full())?;
    println!(
        "nearby period coefficients {:?}, |omega| = {:.4} <= bound {:.4}",
        n.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        n.omega_norm.to_f64(),
        n.bound.to_f64()
    );
    Ok(())
}
