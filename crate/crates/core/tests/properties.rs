use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use zpkit::abelian::{canonical_height, degree, nearby_period, EllipticCurveQ, Point, PolarizedTorus, Subtorus};
use zpkit::algebraic::AlgebraicNumber;
use zpkit::cli::demo::random_lattice_instance;
use zpkit::counting::{
    count_points, enumerate_bounded, semi_rational_count, DefinableSample, Expr, Interval, SetSpec,
};
use zpkit::linalg::{hnf, lattice_volume, lll_reduce, matrix, small_kernel_basis, successive_minima, GramForm, IntMatrix, IntegerLattice};
use zpkit::modular::{
    detect_modular_relation, j_value, modular_polynomial, reduce_to_fundamental_domain, Mat2, QuadraticPoint,
    RationalScalingMatrix, SpecialSubvarietyModular, UpperHalfPoint,
};
use zpkit::numeric::Complex;
use zpkit::torus::subvariety::{constant_monomial_lattices, defect_condition_check, defect_report, random_nested_pair};
use zpkit::torus::unlikely::{satisfies_relation, RationalLaurent};
use zpkit::torus::{torsion_points_on_curve, unlikely_search, LaurentPoly};

const PREC: u32 = 128;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn int_matrix(rows: usize, cols: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(range, cols), rows)
        .prop_map(|m| matrix::from_i64(&m))
}

/// Product of random elementary row operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut u = matrix::identity(n);
        for (i, j, s, swap) in ops {
            if i == j {
                continue;
            }
            if swap {
                u.swap(i, j);
            } else {
                let row = u[j].clone();
                matrix::axpy(&mut u[i], &Integer::from(s), &row);
            }
        }
        u
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn hnf_is_idempotent(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| int_matrix(r, c, -9..=9))) {
        let (h, _) = hnf(&m);
        prop_assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn volume_ignores_unimodular_change(
        (b, u) in (2usize..5).prop_flat_map(|n| (int_matrix(n, n, -5..=5), unimodular(n))),
    ) {
        let n = b.len();
        prop_assume!(matrix::det(&b) != 0);
        let form = GramForm::identity(n);
        let v1 = lattice_volume(&IntegerLattice::new(n, b.clone()).unwrap(), &form).unwrap().to_f64();
        let v2 = lattice_volume(&IntegerLattice::new(n, matrix::mul(&u, &b)).unwrap(), &form).unwrap().to_f64();
        // with the standard form the volume is |det B|
        prop_assert!((v1 - v2).abs() <= 1e-9 * v1);
        prop_assert!((v1 - matrix::det(&b).to_f64().abs()).abs() <= 1e-9 * v1);
    }

    #[test]
    fn lll_keeps_the_lattice(seed in any::<u64>()) {
        let (lat, form) = random_lattice_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = lll_reduce(&lat, &form, 0.99).unwrap();
        let again = IntegerLattice::new(lat.ambient_dim(), r.basis.clone()).unwrap();
        prop_assert_eq!(&again, &lat);
        prop_assert_eq!(r.lattice, lat);
    }

    #[test]
    fn minima_respect_minkowski(seed in any::<u64>()) {
        let (lat, form) = random_lattice_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let m = successive_minima(&lat, &form).unwrap();
        prop_assert!(m.satisfies_minkowski());
        prop_assert!(m.product() <= m.minkowski_bound());
    }

    #[test]
    fn kernel_vectors_are_killed(phi in (1usize..3, 3usize..6).prop_flat_map(|(r, c)| int_matrix(r, c, -7..=7))) {
        let n = phi[0].len();
        let rep = small_kernel_basis(&phi, &GramForm::identity(n)).unwrap();
        for v in &rep.vectors {
            prop_assert!(matrix::is_zero_vec(&matrix::mul_vec(&phi, v)));
        }
    }

    #[test]
    fn defect_identity_and_condition(seed in any::<u64>(), n in 1usize..=6) {
        let (a, b) = random_nested_pair(&mut ChaCha8Rng::seed_from_u64(seed), n);
        for v in [&a, &b] {
            let (l, m) = constant_monomial_lattices(v).unwrap();
            let d = defect_report(v).unwrap();
            prop_assert!(m.is_sublattice_of(&l));
            prop_assert!(d.delta_geo <= d.delta);
            prop_assert_eq!(d.delta - d.delta_geo, l.rank() - m.rank());
        }
        prop_assert!(defect_condition_check(&a, &b).unwrap());
    }

    #[test]
    fn weil_height_axioms(p in -60i64..=60, q in 1i64..=60, m in 1u64..=12, k in 0i64..12, e in -5i64..=5) {
        prop_assume!(p != 0);
        let r = Rational::from((p, q));
        let a = AlgebraicNumber::scaled_root_of_unity(&r, m, k).unwrap();
        let h = a.weil_height().to_f64();
        let rn = Rational::from(rug::ops::Pow::pow(&r, e as i32));
        let an = AlgebraicNumber::scaled_root_of_unity(&rn, m, k * e).unwrap();
        prop_assert!((an.weil_height().to_f64() - e.unsigned_abs() as f64 * h).abs() < 1e-9);
        let inv = AlgebraicNumber::scaled_root_of_unity(&Rational::from(r.recip_ref()), m, -k).unwrap();
        prop_assert!((inv.weil_height().to_f64() - h).abs() < 1e-9);
        let zeta = AlgebraicNumber::root_of_unity(m, k).unwrap();
        prop_assert!(zeta.weil_height().to_f64().abs() < 1e-12);
    }

    #[test]
    fn torsion_points_closed_under_galois(
        terms in prop::collection::vec(((-2i64..=2, -2i64..=2), -2i64..=2), 2..4),
    ) {
        let owned: Vec<(Vec<i64>, Integer)> = terms.iter().map(|&((i, j), c)| (vec![i, j], Integer::from(c))).collect();
        let Ok(f) = LaurentPoly::new(2, owned) else { return Ok(()) };
        prop_assume!(!f.is_zero());
        let s = torsion_points_on_curve(&f, 12).unwrap();
        let pts: Vec<_> = s.isolated().collect();
        for p in &pts {
            for u in (1..p.order).filter(|&u| gcd(u as i64, p.order as i64) == 1) {
                let image: Vec<u64> = p.exponents.iter().map(|&e| e * u % p.order).collect();
                prop_assert!(
                    pts.iter().any(|q| q.order == p.order && q.exponents == image),
                    "conjugate {:?} of {:?} (order {}) missing", image, p.exponents, p.order
                );
            }
        }
    }

    #[test]
    fn unlikely_hits_resubstitute(a in -3i64..=3, b in -3i64..=3, c in 2i64..=4) {
        prop_assume!(b != 0);
        let curve = vec![
            RationalLaurent::from_i64(&[(1, 1)]),
            RationalLaurent::from_i64(&[(0, a), (1, b)]),
            RationalLaurent::from_i64(&[(0, c)]),
        ];
        let s = match unlikely_search(&curve, 2, 1) {
            // curves inside a proper subgroup are refused
            Err(zpkit::Error::Degenerate(_)) => return Ok(()),
            r => r.unwrap(),
        };
        for h in &s.hits {
            prop_assert!(h.relation_vectors.len() >= 2);
            for v in &h.relation_vectors {
                prop_assert!(satisfies_relation(&curve, h.t.min_poly(), v));
            }
        }
    }
}

fn tau(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint::from_f64(PREC, re, im).unwrap()
}

fn sl2_word(word: &[(bool, i64)]) -> Mat2 {
    word.iter().fold(Mat2::identity(), |g, &(s, k)| g.mul(&if s { Mat2::s() } else { Mat2::t(k) }))
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn j_is_invariant(re in -0.5f64..0.5, im in 0.8f64..2.0, word in prop::collection::vec((any::<bool>(), -3i64..=3), 1..6)) {
        let z = tau(re, im);
        let g = sl2_word(&word);
        prop_assume!(g.entries().iter().all(|e| e.as_abs().to_owned() <= 10));
        let d = (&j_value(&z, PREC).unwrap() - &j_value(&g.act_on(&z).unwrap(), PREC).unwrap()).abs_f64();
        prop_assert!(d < 1e-8, "{}", d);
    }

    #[test]
    fn reduction_lands_in_the_domain(re in -20.0f64..20.0, im in 0.01f64..3.0) {
        let z = tau(re, im);
        let (w, g) = reduce_to_fundamental_domain(&z).unwrap();
        prop_assert!(w.is_in_fundamental_domain());
        prop_assert_eq!(g.det(), 1);
        let gz = g.act(z.value());
        prop_assert!((&gz - w.value()).abs_f64() < 1e-30);
    }

    #[test]
    fn relation_found_at_the_right_level(
        re in -0.5f64..0.5, im in 0.9f64..1.6, n in 2u32..=4, b_seed in 0u32..16, split in 0usize..3,
    ) {
        // a primitive upper triangular matrix of determinant n
        let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
        let a = divisors[split % divisors.len()];
        let d = n / a;
        let b = (b_seed % d) as i64;
        prop_assume!(gcd(gcd(a as i64, b), d as i64) == 1);
        let g = Mat2::new(a, b, 0, d);
        let z = tau(re, im);
        let r = detect_modular_relation(&z, &g.act_on(&z).unwrap(), 5, 1e-8).unwrap();
        prop_assert_eq!(r.map(|r| r.level), Some(n));
    }

    #[test]
    fn extra_fixed_point_never_lowers_complexity(
        (a1, b1) in (1i64..4, -3i64..=3), (a2, b2) in (1i64..5, -4i64..=4), c_extra in 1i64..8, s in 2i64..5,
    ) {
        let point = |a: i64, b: i64, c0: i64| -> Option<QuadraticPoint> {
            // smallest c >= c0 with a negative discriminant and primitive coefficients
            (c0..c0 + 50).find_map(|c| QuadraticPoint::new(a, b, c).ok())
        };
        let (Some(p1), Some(p2)) = (point(a1, b1, 1), point(a2, b2, c_extra)) else { return Ok(()) };
        let m = RationalScalingMatrix::from_integer(Mat2::new(s, 1, 0, 1)).unwrap();
        let base = SpecialSubvarietyModular::new(3, vec![vec![2], vec![0, 1]], vec![p1.clone()], vec![vec![m.clone()]]).unwrap();
        let more = SpecialSubvarietyModular::new(4, vec![vec![2, 3], vec![0, 1]], vec![p1, p2.clone()], vec![vec![m]]).unwrap();
        let c0 = base.complexity();
        let c1 = more.complexity();
        prop_assert!(c1 >= c0);
        prop_assert!(c1 >= p2.discriminant().abs());
    }

    #[test]
    fn product_volumes_multiply(r1 in -0.5f64..0.5, i1 in 0.6f64..2.5, r2 in -0.5f64..0.5, i2 in 0.6f64..2.5) {
        let e1 = PolarizedTorus::elliptic(&Complex::from_f64(PREC, r1, i1)).unwrap();
        let e2 = PolarizedTorus::elliptic(&Complex::from_f64(PREC, r2, i2)).unwrap();
        let x = e1.product(&e2).unwrap();
        let v = x.full().volume().unwrap().to_f64();
        let v12 = e1.full().volume().unwrap().to_f64() * e2.full().volume().unwrap().to_f64();
        prop_assert!((v - v12).abs() < 1e-9 * v12);
        prop_assert!((degree(&x.full()).unwrap().to_f64() - 2.0 * v).abs() < 1e-9 * v);
    }

    #[test]
    fn nearby_period_is_tangent(
        re in -0.5f64..0.5, im in 0.7f64..2.0, w in (-1.0f64..1.0, -1.0f64..1.0),
        shift in prop::collection::vec(-4i64..=4, 4),
    ) {
        let e = PolarizedTorus::elliptic(&Complex::from_f64(PREC, re, im)).unwrap();
        let x = e.product(&e).unwrap();
        let y = Subtorus::from_i64(&x, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        // z = (w, w) + a period of X
        let c: Vec<Integer> = shift.iter().map(|&s| Integer::from(s)).collect();
        let period = x.period(&c);
        let base = Complex::from_f64(PREC, w.0, w.1);
        let z: Vec<Complex> = period.iter().map(|p| p + &base).collect();
        let n = nearby_period(&z, &y).unwrap();
        prop_assert!(n.tangent_residual < 1e-9);
        prop_assert!(n.omega_norm <= n.bound);
    }

    #[test]
    fn canonical_height_is_quadratic(curve in 0usize..3, a in 1i64..6, b in 1i64..6) {
        let (e, p) = [
            (EllipticCurveQ::new(0, -2).unwrap(), Point::new(3, 5)),
            (EllipticCurveQ::new(0, 17).unwrap(), Point::new(-2, 3)),
            (EllipticCurveQ::new(-1, 1).unwrap(), Point::new(1, 1)),
        ][curve].clone();
        let (p, q) = (e.mul(a, &p), e.mul(b, &p));
        let h = |x: &Point| canonical_height(&e, x, PREC).unwrap().value.to_f64();
        prop_assert!((h(&e.double(&p)) - 4.0 * h(&p)).abs() < 1e-6);
        let par = h(&e.add(&p, &q)) + h(&e.add(&p, &e.neg(&q))) - 2.0 * h(&p) - 2.0 * h(&q);
        prop_assert!(par.abs() < 1e-5, "{}", par);
    }

    #[test]
    fn k_height_decreases_in_k(t in 2u64..8, lo in -3i64..2, width in 1i64..3) {
        let numbers = enumerate_bounded(2, t, &Interval::new(lo, lo + width).unwrap()).unwrap();
        for y in &numbers {
            let hs: Vec<Option<Integer>> = (1..=3).map(|k| y.k_height(k).unwrap().value).collect();
            prop_assert!(y.k_height(2).unwrap().at_most(&Integer::from(t)));
            for w in hs.windows(2) {
                if let (Some(a), Some(b)) = (&w[0], &w[1]) {
                    prop_assert!(b <= a);
                }
                prop_assert!(!(w[0].is_some() && w[1].is_none()));
            }
        }
    }
}

fn graph(coeffs: &[i64], lo: i64, hi: i64) -> DefinableSample {
    DefinableSample::new(SetSpec::PolynomialGraph {
        coeffs: coeffs.iter().map(i64::to_string).collect(),
        domain: Interval::new(lo, hi).unwrap(),
    })
    .unwrap()
}

fn height1(q: &Rational) -> Integer {
    Integer::from(q.numer().abs_ref()).max(q.denom().clone())
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn count_monotone_in_t(coeffs in prop::collection::vec(-3i64..=3, 1..4), t in 1u64..12, dt in 0u64..6) {
        let z = graph(&coeffs, 0, 1);
        let c1 = count_points(&z, 1, t).unwrap().count;
        let c2 = count_points(&z, 1, t + dt).unwrap().count;
        prop_assert!(c1 <= c2);
    }

    #[test]
    fn count_monotone_in_box(coeffs in prop::collection::vec(-3i64..=3, 1..4), t in 1u64..10, lo in -2i64..=0, hi in 1i64..=3) {
        let inner = count_points(&graph(&coeffs, 0, 1), 1, t).unwrap().count;
        let outer = count_points(&graph(&coeffs, lo, hi), 1, t).unwrap().count;
        prop_assert!(inner <= outer);
    }

    #[test]
    fn points_match_brute_force(
        pts in prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=9), 2), 0..12),
        t in 1u64..10,
    ) {
        let rats: Vec<Vec<Rational>> = pts.iter().map(|p| p.iter().map(|&(a, b)| Rational::from((a, b))).collect()).collect();
        let z = DefinableSample::new(SetSpec::Points {
            points: rats.iter().map(|p| p.iter().map(|q| q.to_string()).collect()).collect(),
        })
        .unwrap();
        let mut distinct = rats.clone();
        distinct.sort();
        distinct.dedup();
        let tt = Integer::from(t);
        let expected = distinct.iter().filter(|p| p.iter().all(|q| height1(q) <= tt)).count();
        prop_assert_eq!(count_points(&z, 1, t).unwrap().count, expected);
    }

    #[test]
    fn projection_count_bounded_by_tuples(coeffs in prop::collection::vec(-3i64..=3, 1..4), t in 1u64..10) {
        let z = DefinableSample::new(SetSpec::Curve {
            coords: vec![
                Expr::Var,
                Expr::Var,
                coeffs.iter().rev().fold(Expr::constant(0), |acc, &c| {
                    Expr::Add(vec![Expr::Mul(vec![acc, Expr::Var]), Expr::constant(c)])
                }),
            ],
            param: Interval::unit(),
        })
        .unwrap()
        .with_split(1, 2)
        .unwrap();
        let r = semi_rational_count(&z, 1, t).unwrap();
        prop_assert!(r.count <= r.tuples);
    }
}

#[test]
fn phi_coefficients_are_symmetric() {
    for n in 2..=5 {
        assert!(modular_polynomial(n).unwrap().is_symmetric());
    }
}
