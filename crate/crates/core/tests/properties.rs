//! Property tests for the invariants of the metric hierarchy.

use proptest::prelude::*;
use sparsemetric::ball::{alt_ball_contains, ball_boundary_sample_2d, limit_ball_membership, Ball, BallMetric};
use sparsemetric::gauge::{minkowski_functional, norm, norm_candidate_from_metric, ConvexBody, NormCandidate};
use sparsemetric::hausdorff::{hausdorff, PointSet};
use sparsemetric::product::{
    ds_distance, embedding_compatibility_check, product_distance, support_distance, support_size,
};
use sparsemetric::sparse::{l0_min_bruteforce, solution_space_sample, L0Options, LinearSystem};
use sparsemetric::{Distance, Order, ProductMetric, ScalarMetric, Tau, Vector};

fn scalar_metric() -> impl Strategy<Value = ScalarMetric> {
    prop_oneof![
        Just(ScalarMetric::Absolute),
        (0.05f64..=1.0).prop_map(|s| ScalarMetric::power(s).unwrap()),
        Just(ScalarMetric::discrete()),
    ]
}

fn order() -> impl Strategy<Value = Order> {
    prop_oneof![
        Just(Order::Finite(1.0)),
        Just(Order::Finite(2.0)),
        (1.0f64..6.0).prop_map(Order::Finite),
        Just(Order::Infinity),
    ]
}

fn spec_and_points() -> impl Strategy<Value = (ProductMetric, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|n| {
        (
            prop::collection::vec(scalar_metric(), n),
            order(),
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
            .prop_map(|(c, p, x, y, z)| (ProductMetric::new(c, p).unwrap(), x, y, z))
    })
}

fn vec_pair(n: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    n.prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
    })
}

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scalar_symmetric_and_zero_iff_equal(k in scalar_metric(), x in -1e3f64..1e3, y in -1e3f64..1e3) {
        prop_assert_eq!(k.distance(x, y), k.distance(y, x));
        prop_assert_eq!(k.distance(x, x), 0.0);
        if (x - y).abs() > 1e-9 {
            prop_assert!(k.distance(x, y) > 0.0);
        }
    }

    #[test]
    fn product_metric_axioms((spec, x, y, z) in spec_and_points()) {
        let dxy = spec.eval(&x, &y);
        prop_assert!(dxy >= 0.0);
        prop_assert_eq!(spec.eval(&x, &x), 0.0);
        prop_assert_eq!(dxy, spec.eval(&y, &x));
        prop_assert!(dxy <= spec.eval(&x, &z) + spec.eval(&z, &y) + 1e-12);
    }

    #[test]
    fn d1_is_taxicab_and_d0_is_discrete_sum((x, y) in vec_pair(1..8)) {
        let n = x.len();
        let (x, y) = (v(&x), v(&y));
        let taxicab = ProductMetric::homogeneous(ScalarMetric::Absolute, n, Order::Finite(1.0)).unwrap();
        prop_assert_eq!(ds_distance(1.0, &x, &y).unwrap(), product_distance(&taxicab, &x, &y).unwrap());

        let support = support_distance(&x, &y, Tau::default()).unwrap();
        let counting = ProductMetric::homogeneous(ScalarMetric::discrete(), n, Order::Finite(1.0)).unwrap();
        prop_assert_eq!(support as f64, product_distance(&counting, &x, &y).unwrap());
    }

    #[test]
    fn discrete_p_metric_is_root_of_support((x, y) in vec_pair(1..8), p in 1.0f64..5.0) {
        let n = x.len();
        // Force some coordinates to agree.
        let y: Vec<f64> = y.iter().zip(&x).enumerate().map(|(i, (b, a))| if i % 2 == 0 { *a } else { *b }).collect();
        let (x, y) = (v(&x), v(&y));
        let spec = ProductMetric::homogeneous(ScalarMetric::discrete(), n, Order::Finite(p)).unwrap();
        let support = support_distance(&x, &y, Tau::default()).unwrap() as f64;
        let got = product_distance(&spec, &x, &y).unwrap();
        prop_assert!((got - support.powf(1.0 / p)).abs() <= 1e-12);
    }

    #[test]
    fn embedding_is_compatible(
        (spec, anchor, _, _) in spec_and_points(),
        index in 0usize..6,
        pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..10),
    ) {
        let index = index % spec.dim();
        let gap = embedding_compatibility_check(&spec, &v(&anchor), index, &pairs).unwrap();
        prop_assert!(gap <= 1e-12, "{}", gap);
    }

    #[test]
    fn limit_ball_is_support_ball(
        x in prop::collection::vec(prop_oneof![Just(0.0), -5.0f64..5.0], 1..6),
        r in 0.0f64..7.0,
    ) {
        let tau = Tau::default();
        prop_assert_eq!(limit_ball_membership(r, &x, tau), support_size(&x, tau) as f64 <= r);
        let origin = Vector::zeros(x.len()).unwrap();
        let ball = Ball::closed(origin, r, BallMetric::support()).unwrap();
        prop_assert_eq!(limit_ball_membership(r, &x, tau), ball.contains(&v(&x)).unwrap());
    }

    #[test]
    fn alt_ball_matches_generic(x1 in prop_oneof![Just(0.0), -3.0f64..3.0], x2 in -3.0f64..3.0, r in 0.0f64..3.0) {
        let spec = ProductMetric::new(vec![ScalarMetric::discrete(), ScalarMetric::Absolute], Order::Finite(1.0)).unwrap();
        let ball = Ball::closed(Vector::zeros(2).unwrap(), r, spec.into()).unwrap();
        prop_assert_eq!(alt_ball_contains(r, [x1, x2], Tau::default()), ball.contains(&v(&[x1, x2])).unwrap());
    }

    #[test]
    fn boundary_points_on_sphere(
        comps in prop::collection::vec(prop_oneof![Just(ScalarMetric::Absolute), (0.1f64..=1.0).prop_map(|s| ScalarMetric::power(s).unwrap())], 2),
        p in order(),
        r in 0.1f64..10.0,
        cx in -5.0f64..5.0,
        cy in -5.0f64..5.0,
    ) {
        let spec = ProductMetric::new(comps, p).unwrap();
        let ball = Ball::closed(v(&[cx, cy]), r, spec.clone().into()).unwrap();
        for pt in ball_boundary_sample_2d(&ball, 24, 1e-9).unwrap() {
            let d = spec.eval(&[pt.x, pt.y], &[cx, cy]);
            prop_assert!((d - r).abs() <= 1e-9, "{:?} {}", pt, d);
        }
    }

    #[test]
    fn hausdorff_symmetric(
        k in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..6),
        a in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..6),
        p in order(),
    ) {
        let spec = ProductMetric::homogeneous(ScalarMetric::Absolute, 2, p).unwrap();
        let (k, a) = (PointSet::from_rows(k).unwrap(), PointSet::from_rows(a).unwrap());
        prop_assert_eq!(hausdorff(&k, &a, &spec).unwrap(), hausdorff(&a, &k, &spec).unwrap());
    }

    #[test]
    fn minkowski_recovers_p_norm(
        x in prop::collection::vec(-10.0f64..10.0, 1..6),
        p in prop_oneof![Just(Order::Finite(1.0)), Just(Order::Finite(2.0)), (1.0f64..8.0).prop_map(Order::Finite), Just(Order::Infinity)],
    ) {
        let body = ConvexBody::open_unit_ball(p, x.len()).unwrap();
        let got = minkowski_functional(&body, &v(&x), 1e-9).unwrap();
        prop_assert!((got - norm(&x, p)).abs() <= 2e-9);
    }
}

#[test]
fn induced_gauge_matches_p_norm() {
    for p in [
        Order::Finite(1.0),
        Order::Finite(2.0),
        Order::Finite(3.0),
        Order::Infinity,
    ] {
        let spec = ProductMetric::homogeneous(ScalarMetric::Absolute, 4, p).unwrap();
        let NormCandidate::IsNormInduced(gauge) = norm_candidate_from_metric(spec, 4, 2_000, 1e-9, 8).unwrap() else {
            panic!("p-metric rejected for {p}");
        };
        let mut rng_state = 1u64;
        for _ in 0..500 {
            let x: Vec<f64> = (0..4)
                .map(|_| {
                    rng_state = rng_state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    ((rng_state >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0
                })
                .collect();
            assert!((gauge.value(&x) - norm(&x, p)).abs() <= 1e-12);
        }
    }
}

#[test]
fn l0_optimum_no_denser_than_sampled_solutions() {
    let sys = LinearSystem::from_rows(
        &[
            vec![1.0, 2.0, 0.0, -1.0, 3.0],
            vec![0.0, 1.0, 1.0, 2.0, -1.0],
            vec![2.0, 0.0, 1.0, 1.0, 1.0],
        ],
        &[3.0, 1.0, 4.0],
    )
    .unwrap();
    let opts = L0Options::default();
    let best = l0_min_bruteforce(&sys, &opts).unwrap();
    for x in solution_space_sample(&sys, 200, 4).unwrap() {
        assert!(sys.residual(&x) <= opts.residual_tol);
        assert!(best.support.len() <= support_size(&x, opts.tau));
    }
}

#[test]
fn metric_trait_object_works() {
    let metrics: Vec<Box<dyn Distance>> = vec![
        Box::new(ProductMetric::ds(0.5, 2).unwrap()),
        Box::new(sparsemetric::gauge::metric_from_norm(Order::Infinity)),
        Box::new(|x: &[f64], y: &[f64]| (x[0] - y[0]).abs()),
    ];
    for m in &metrics {
        assert_eq!(m.distance(&[1.0, 1.0], &[1.0, 1.0]), 0.0);
    }
}
