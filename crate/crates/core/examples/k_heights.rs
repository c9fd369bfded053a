//! k-heights of rationals and quadratic irrationals.

use rug::{Integer, Rational};
use zpkit::algebraic::AlgebraicNumber;
use zpkit::counting::{k_height, k_height_rational};
use zpkit::numeric::Complex;

fn main() -> zpkit::Result<()> {
    for (p, q) in [(3, 7), (-22, 5), (1, 1)] {
        let r = Rational::from((p, q));
        let hs: Vec<String> = (1..=3).map(|k| k_height_rational(&r, k).unwrap().value.unwrap().to_string()).collect();
        println!("H_1..3({r}) = {}", hs.join(", "));
    }
    // golden ratio, root of x^2 - x - 1
    let phi = AlgebraicNumber::root_of(&[Integer::from(-1), Integer::from(-1), Integer::from(1)], &Complex::from_f64(128, 1.6, 0.0))?;
    for k in 1..=3 {
        let h = k_height(&phi, k)?;
        println!("H_{k}(golden ratio) = {}", h.value.map_or("infinite".into(), |v| v.to_string()));
    }
    Ok(())
}
