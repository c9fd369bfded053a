//! Real algebraic numbers of bounded k-height in an interval.

use zpkit::counting::{enumerate_bounded, farey_count, Interval};

fn main() -> zpkit::Result<()> {
    let unit = Interval::unit();
    for t in [5, 10, 50] {
        let n = enumerate_bounded(1, t, &unit)?.len();
        println!("rationals in [0,1] of height <= {t}: {n} (Farey count {})", farey_count(t));
    }
    let quad = enumerate_bounded(2, 3, &Interval::new(1, 2)?)?;
    println!("degree <= 2, H_2 <= 3, in [1,2]: {} numbers", quad.len());
    for y in quad.iter().filter(|y| y.degree() == 2) {
        println!("  {:.10}  minimal polynomial {:?}", y.value.to_f64(), y.min_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    Ok(())
}
