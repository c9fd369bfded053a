//! Small homomorphisms E x E -> E sending a point to a period.

use rug::{Integer, Rational};
use zpkit::abelian::{annihilates_exactly, product_projections, small_annihilating_hom, PolarizedTorus};
use zpkit::numeric::Complex;

fn main() -> zpkit::Result<()> {
    let p = 128;
    let e = PolarizedTorus::elliptic(&Complex::from_f64(p, 0.17, 1.31))?;
    let x = e.product(&e)?;
    let (p1, p2) = product_projections(1, 1);
    let gens = [p1, p2];

    // a generic point of the diagonal: the difference map kills it
    let w = Complex::from_f64(p, 0.3217, 0.2718);
    let h = small_annihilating_hom(&x, &gens, &[w.clone(), w], &e)?;
    let c: Vec<String> = h.coefficients.unwrap_or_default().iter().map(Integer::to_string).collect();
    println!("diagonal point: coefficients {c:?}, residual {:.1e}", h.residual);

    // a torsion point with period coordinates (1/3, 0, 1/2, 1/2)
    let coords: Vec<Rational> = [(1, 3), (0, 1), (1, 2), (1, 2)].iter().map(|&q| Rational::from(q)).collect();
    let omega = e.periods();
    let z: Vec<Complex> = (0..2)
        .map(|k| {
            let f = |q: &Rational| Complex::from_rational(p, q);
            &f(&coords[2 * k]) * &omega[0][0] + &f(&coords[2 * k + 1]) * &omega[1][0]
        })
        .collect();
    let h = small_annihilating_hom(&x, &gens, &z, &e)?;
    println!("torsion point: norm {:.4}, kills it exactly: {}", h.norm.to_f64(), annihilates_exactly(&h.matrix, &coords));
    Ok(())
}
