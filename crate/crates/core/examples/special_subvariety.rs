//! A special subvariety of Y(1)^3: a CM point in one coordinate and a Hecke curve in the others.

use zpkit::modular::{special_point_parameter_height, Mat2, QuadraticPoint, RationalScalingMatrix, SpecialSubvarietyModular};

fn main() -> zpkit::Result<()> {
    // coordinate 2 fixed at the root of Z^2 - Z + 2; coordinates 0, 1 related by z -> 3z + 1
    let s = SpecialSubvarietyModular::new(
        3,
        vec![vec![2], vec![0, 1]],
        vec![QuadraticPoint::new(1, -1, 2)?],
        vec![vec![RationalScalingMatrix::from_integer(Mat2::new(3, 1, 0, 1))?]],
    )?;
    println!("dimension {}, complexity {}", s.dim(), s.complexity());
    let h = special_point_parameter_height(&s);
    println!("parameter 2-heights {:?}, max {}", h.heights, h.height);
    println!("{}", serde_json::to_string_pretty(&s)?);
    Ok(())
}
