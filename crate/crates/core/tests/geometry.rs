//! Property tests for model spaces, comparison triangles and the R-trees.

use std::f64::consts::PI;

use cathom::catk::{
    blowup_metric, comparison_triangle, geodesic_point, model_distance, sample_point, Kappa,
};
use cathom::rtree::{
    fiber_ultrametric, lift_to_fiber, retraction, stretch_inverse, stretch_map, EndDirection, RTree, TreePoint,
};
use num_rational::Rational64;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_kappa() -> impl Strategy<Value = Kappa> {
    prop_oneof![Just(-2.0), Just(-1.0), Just(-0.25), Just(0.0), Just(0.5), Just(1.0), Just(2.0)]
        .prop_map(|k| Kappa::new(k).unwrap())
}

fn radius(k: Kappa) -> f64 {
    if k.value() > 0.0 { 0.45 * k.diameter() } else { 3.0 }
}

fn arb_rational() -> impl Strategy<Value = Rational64> {
    (-400i64..=400, 1i64..=12).prop_map(|(n, d)| Rational64::new(n, d))
}

fn arb_point() -> impl Strategy<Value = TreePoint> {
    prop_oneof![
        (arb_rational(), arb_rational()).prop_map(|(x, y)| TreePoint::new(x, y)),
        arb_rational().prop_map(|x| TreePoint::new(x, Rational64::from_integer(0))),
        (-3i64..=3, arb_rational()).prop_map(|(x, y)| TreePoint::new(Rational64::from_integer(x), y)),
    ]
}

fn arb_fiber_point(alpha: Rational64) -> impl Strategy<Value = TreePoint> {
    (0i64..=400, 1i64..=6, any::<bool>()).prop_map(move |(n, d, up)| {
        let t = Rational64::new(n, d);
        TreePoint::new(alpha + t, if up { t } else { -t })
    })
}

const XI: EndDirection = EndDirection::AxisPlus;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn model_triangle_inequality(k in arb_kappa(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [p, q, r] = [(); 3].map(|_| sample_point(k, radius(k), &mut rng));
        let d = |a, b| model_distance(k, a, b).unwrap();
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-9);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() <= 1e-12);
        prop_assert!(d(&p, &p).abs() <= 1e-7);
    }

    #[test]
    fn model_geodesics_have_arc_length(k in arb_kappa(), seed in any::<u64>(), t in 0.0f64..=1.0, s in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [p, q] = [(); 2].map(|_| sample_point(k, radius(k), &mut rng));
        let d = model_distance(k, &p, &q).unwrap();
        let gt = geodesic_point(k, &p, &q, t).unwrap();
        let gs = geodesic_point(k, &p, &q, s).unwrap();
        prop_assert!((model_distance(k, &p, &gt).unwrap() - t * d).abs() <= 1e-9);
        prop_assert!((model_distance(k, &gt, &gs).unwrap() - (t - s).abs() * d).abs() <= 1e-9);
    }

    #[test]
    fn angles_grow_with_curvature(a in 0.05f64..1.0, b in 0.05f64..1.0, c in 0.05f64..1.0, k1 in -2.0f64..2.0, k2 in -2.0f64..2.0) {
        let (lo, hi) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
        let t_lo = comparison_triangle(Kappa::new(lo).unwrap(), a, b, c);
        let t_hi = comparison_triangle(Kappa::new(hi).unwrap(), a, b, c);
        prop_assume!(t_lo.is_ok() && t_hi.is_ok());
        let (t_lo, t_hi) = (t_lo.unwrap(), t_hi.unwrap());
        for i in 0..3 {
            prop_assert!(t_lo.angles[i] <= t_hi.angles[i] + 1e-12);
            prop_assert!((0.0..=PI).contains(&t_lo.angles[i]));
        }
    }

    #[test]
    fn blowup_dominates(d in 0.0f64..100.0, theta in 0.0f64..=PI) {
        let v = blowup_metric(d, theta).unwrap();
        prop_assert!(v >= d && v >= theta);
        prop_assert!(v <= d + theta + 1e-12);
    }

    #[test]
    fn tree_metric_axioms(p in arb_point(), q in arb_point(), r in arb_point()) {
        let t = RTree::T2;
        let d = |a: &TreePoint, b: &TreePoint| t.distance(a, b).unwrap();
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r));
        prop_assert_eq!(d(&p, &q) == Rational64::from_integer(0), p == q);
    }

    #[test]
    fn tree_geodesics_are_exact(p in arb_point(), q in arb_point(), n in 0i64..=12, m in 0i64..=12) {
        let t = RTree::T2;
        let (s, u) = (Rational64::new(n, 12), Rational64::new(m, 12));
        let d = t.distance(&p, &q).unwrap();
        let gs = t.geodesic(&p, &q, s).unwrap();
        let gu = t.geodesic(&p, &q, u).unwrap();
        prop_assert_eq!(t.distance(&p, &gs).unwrap(), s * d);
        prop_assert_eq!(t.distance(&gs, &q).unwrap(), (Rational64::from_integer(1) - s) * d);
        prop_assert_eq!(t.distance(&gs, &gu).unwrap(), (s - u).abs() * d);
    }

    #[test]
    fn retraction_is_one_lipschitz(p in arb_point(), q in arb_point()) {
        let t = RTree::T2;
        let (rp, rq) = (retraction(t, XI, &p).unwrap(), retraction(t, XI, &q).unwrap());
        prop_assert!(t.distance(&rp, &rq).unwrap() <= t.distance(&p, &q).unwrap());
        prop_assert_eq!(retraction(t, XI, &rp).unwrap(), rp);
    }

    #[test]
    fn pairs_lift_isometrically(y in arb_point(), alpha in arb_rational()) {
        let x = lift_to_fiber(&y, alpha);
        let t = RTree::T2;
        let base = retraction(t, XI, &y).unwrap().x;
        prop_assert_eq!(retraction(t, XI, &x).unwrap().x, alpha);
        prop_assert_eq!(t.distance(&x, &y).unwrap(), (base - alpha).abs());
    }

    #[test]
    fn fibers_are_ultrametric(pts in arb_rational().prop_flat_map(|a| prop::collection::vec(arb_fiber_point(a), 3))) {
        let delta = |i: usize, j: usize| fiber_ultrametric(RTree::T2, XI, &pts[i], &pts[j]).unwrap().delta;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            prop_assert!(delta(i, j) <= delta(i, k).max(delta(k, j)));
            prop_assert_eq!(delta(i, j), RTree::T2.distance(&pts[i], &pts[j]).unwrap());
        }
    }

    #[test]
    fn stretch_round_trip(p in arb_point()) {
        let s = stretch_map(&p);
        prop_assert!(RTree::T1.contains(&s));
        prop_assert_eq!(stretch_inverse(&s).unwrap(), p);
        prop_assert!(s.x.abs() <= p.x.abs());
    }
}
