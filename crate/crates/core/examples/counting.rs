//! N(Z, k, T) for a few definable sets, and a growth exponent fit.

use zpkit::counting::{
    count_points, growth_fit, isolated_count, semi_rational_count, DefinableSample, Expr, Interval, SetSpec,
};

fn main() -> zpkit::Result<()> {
    let exp2 = DefinableSample::new(SetSpec::Graph {
        f: Expr::Pow(Box::new(Expr::constant(2)), Box::new(Expr::Var)),
        domain: Interval::new(1, 2)?,
    })?;
    for t in [4, 20, 100] {
        println!("graph of 2^x over [1,2], T = {t}: {} points", count_points(&exp2, 1, t)?.count);
    }

    let diag = DefinableSample::new(SetSpec::Graph { f: Expr::Var, domain: Interval::unit() })?;
    let pairs: Vec<(u64, u64)> = (10..=80).step_by(10).map(|t| Ok((t, count_points(&diag, 1, t)?.count as u64))).collect::<zpkit::Result<_>>()?;
    let fit = growth_fit(&pairs)?;
    println!("diagonal: counts {pairs:?}");
    println!("fitted exponent {:.3}, constant {:.3}", fit.epsilon, fit.c);

    // (t, t, t^2): the projection to the last coordinates versus isolated tuples
    let curve = DefinableSample::new(SetSpec::Curve {
        coords: vec![Expr::Var, Expr::Var, Expr::Pow(Box::new(Expr::Var), Box::new(Expr::constant(2)))],
        param: Interval::unit(),
    })?
    .with_split(1, 2)?;
    let s = semi_rational_count(&curve, 1, 6)?;
    let i = isolated_count(&curve, 1, 6)?;
    println!("T = 6: projection count {} (from {} tuples), isolated count {}", s.count, s.tuples, i.count);
    Ok(())
}
