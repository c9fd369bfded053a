//! Canonical heights on y^2 = x^3 - 2 and on curves with torsion.

use zpkit::abelian::{canonical_height, EllipticCurveQ, Point};

fn main() -> zpkit::Result<()> {
    let e = EllipticCurveQ::new(0, -2)?;
    let p = Point::new(3, 5);
    for n in 1..=4 {
        let q = e.mul(n, &p);
        let h = canonical_height(&e, &q, 128)?;
        println!("h({n}P) = {:.12}  (h/n^2 = {:.12})", h.value.to_f64(), h.value.to_f64() / (n * n) as f64);
    }
    let e = EllipticCurveQ::new(0, 1)?;
    let t = Point::new(2, 3);
    let h = canonical_height(&e, &t, 128)?;
    println!("(2, 3) on y^2 = x^3 + 1: order {:?}, height {}", h.torsion_order, h.value.to_f64());
    Ok(())
}
