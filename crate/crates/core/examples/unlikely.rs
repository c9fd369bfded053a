//! Points of the curve (t, 1 - t, 2) lying in algebraic subgroups of codimension 2.

use zpkit::torus::unlikely::{satisfies_relation, RationalLaurent};
use zpkit::torus::unlikely_search;

fn main() -> zpkit::Result<()> {
    let curve = vec![
        RationalLaurent::from_i64(&[(1, 1)]),
        RationalLaurent::from_i64(&[(0, 1), (1, -1)]),
        RationalLaurent::from_i64(&[(0, 2)]),
    ];
    let s = unlikely_search(&curve, 4, 1)?;
    println!("tried {} exponent vectors, {} pairs", s.vectors_tried, s.pairs_tried);
    for h in &s.hits {
        let ok = h.relation_vectors.iter().all(|a| satisfies_relation(&curve, h.t.min_poly(), a));
        println!("t root of {:?}, relations {:?}, exact: {ok}", h.t.min_poly(), h.relation_vectors);
    }
    Ok(())
}
