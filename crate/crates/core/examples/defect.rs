//! Defect and geodesic defect of monomial cosets, and the defect condition for nested pairs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zpkit::linalg::IntegerLattice;
use zpkit::torus::subvariety::{defect_condition_check, defect_report, random_nested_pair, MonomialSubvariety};
use zpkit::torus::ScaledRoot;

fn coset(constants: &[(i64, i64, i64)], directions: &[Vec<i64>], n: usize) -> zpkit::Result<MonomialSubvariety> {
    // constant = modulus * exp(2 pi i * num / den)
    let cs = constants
        .iter()
        .map(|&(r, num, den)| ScaledRoot::new(r.into(), (num, den).into()))
        .collect::<zpkit::Result<Vec<_>>>()?;
    MonomialSubvariety::from_exact(&cs, IntegerLattice::from_i64(n, directions)?)
}

fn main() -> zpkit::Result<()> {
    // {(t, t^2, 3)}: a translate of a subtorus by a non-torsion point
    let b = coset(&[(1, 0, 1), (1, 0, 1), (3, 0, 1)], &[vec![1, 2, 0]], 3)?;
    // the point (2, 4, 3) on it
    let a = coset(&[(2, 0, 1), (4, 0, 1), (3, 0, 1)], &[], 3)?;
    for (name, v) in [("B = (t, t^2, 3)", &b), ("A = (2, 4, 3)", &a)] {
        let d = defect_report(v)?;
        println!("{name}: dim {} delta {} delta_geo {} (rank L {}, rank M {})", d.dim_a, d.delta, d.delta_geo, d.rank_l, d.rank_m);
    }
    println!("defect condition for A in B: {}", defect_condition_check(&a, &b)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let held = (0..50)
        .filter(|_| {
            let (a, b) = random_nested_pair(&mut rng, 4);
            defect_condition_check(&a, &b).unwrap()
        })
        .count();
    println!("random nested pairs in G_m^4: condition holds {held}/50");
    Ok(())
}
