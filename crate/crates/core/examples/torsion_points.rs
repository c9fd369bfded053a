//! Torsion points on x + y = 1 in G_m^2: the two primitive sixth roots of unity.

use zpkit::torus::torsion::vanishes_at;
use zpkit::torus::{torsion_points_on_curve, LaurentPoly};

fn main() -> zpkit::Result<()> {
    let f = LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], -1)])?;
    let s = torsion_points_on_curve(&f, 30)?;
    for p in s.isolated() {
        println!(
            "(zeta_{m}^{a}, zeta_{m}^{b})  exact check: {}",
            vanishes_at(&f, p.order, &p.exponents),
            m = p.order,
            a = p.exponents[0],
            b = p.exponents[1]
        );
    }

    // x - y vanishes on the whole diagonal, a torsion coset
    let g = LaurentPoly::from_i64(2, &[(&[1, 0], 1), (&[0, 1], -1)])?;
    let s = torsion_points_on_curve(&g, 6)?;
    println!("x = y: {} torsion points found, cosets {}", s.points.len(), serde_json::to_string(&s.cosets)?);
    Ok(())
}
