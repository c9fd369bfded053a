//! Heuristic detection of a modular relation between two points of H.

use zpkit::modular::{detect_modular_relation, Mat2, UpperHalfPoint};

fn main() -> zpkit::Result<()> {
    let z = UpperHalfPoint::parse(128, "0.137+1.09i")?;
    // 2I acts trivially on H, so its relation is found at level 1
    for g in [Mat2::new(3, 1, 0, 1), Mat2::new(1, 1, 0, 5), Mat2::new(2, 0, 0, 2)] {
        let w = g.act_on(&z)?;
        match detect_modular_relation(&z, &w, 6, 1e-20)? {
            Some(r) => println!("g with det {}: level {} (relative residual {:.1e})", g.det(), r.level, r.relative_residual),
            None => println!("g with det {}: nothing up to level 6", g.det()),
        }
    }
    let far = UpperHalfPoint::parse(128, "0.3+1.7i")?;
    println!("unrelated point: {:?}", detect_modular_relation(&z, &far, 6, 1e-20)?.map(|r| r.level));
    Ok(())
}
