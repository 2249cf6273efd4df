//! Acceptance suite. Run with
//! `cargo test -p sparsemetric-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::fs;
use std::process::Command;

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use sparsemetric::ball::{
    alt_ball_contains, ball_boundary_sample_2d, ball_nesting_check, Ball, BallMetric, NestingDirection,
};
use sparsemetric::gauge::{check_convexity, check_homogeneity, minkowski_functional, norm, ConvexBody, Gauge};
use sparsemetric::hausdorff::{hausdorff, PointSet};
use sparsemetric::metric::{check_metric_axioms, check_metric_axioms_exhaustive, Axiom, SampleBox};
use sparsemetric::product::{ds_distance, limit_scan, support_distance};
use sparsemetric::sparse::{l0_min_bruteforce, surrogate_ranking_experiment, L0Options, LinearSystem};
use sparsemetric::{Error, Order, ProductMetric, ScalarMetric, Tau, Vector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn orders() -> [Order; 3] {
    [Order::Finite(1.0), Order::Finite(2.0), Order::Infinity]
}

fn metric_axioms() -> Outcome {
    let kinds = [
        ScalarMetric::Absolute,
        ScalarMetric::power(0.25).unwrap(),
        ScalarMetric::power(0.5).unwrap(),
        ScalarMetric::power(1.0).unwrap(),
        ScalarMetric::discrete(),
    ];
    let domain = SampleBox::new(5, -10.0, 10.0).unwrap();
    let mut specs = Vec::new();
    for order in orders() {
        for kind in kinds {
            specs.push(ProductMetric::homogeneous(kind, 5, order).unwrap());
        }
        specs.push(ProductMetric::new(kinds.to_vec(), order).unwrap());
    }
    for (i, spec) in specs.iter().enumerate() {
        let report = check_metric_axioms(spec, &domain, 10_000, 1e-12, i as u64).map_err(|e| e.to_string())?;
        ensure(
            report.is_clean(),
            format!(
                "{:?} under {}: {:?}",
                spec.components(),
                spec.order(),
                report.violations.first()
            ),
        )?;
    }
    Ok(format!("{} product metrics x 10000 triples, 0 violations", specs.len()))
}

fn non_metric_witnesses() -> Outcome {
    let half = Gauge::fp(0.5).unwrap();
    let d = |x: &[f64], y: &[f64]| {
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        half.value(&diff)
    };
    let points = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
    let report = check_metric_axioms_exhaustive(&d, &points, 1e-12).map_err(|e| e.to_string())?;
    let v = report.first(Axiom::Triangle).ok_or("no triangle witness for p = 0.5")?;
    ensure(v.magnitude == 2.0, format!("p = 0.5 witness magnitude {}", v.magnitude))?;
    ensure(d(&points[0], &points[2]) == 4.0, "d((0,0),(1,1)) != 4")?;

    let squared = |x: &[f64], y: &[f64]| (x[0] - y[0]).powi(2);
    let domain = SampleBox::new(1, -5.0, 5.0).unwrap();
    let report = check_metric_axioms(&squared, &domain, 1000, 1e-12, 0).map_err(|e| e.to_string())?;
    let sq = report.first(Axiom::Triangle).ok_or("no triangle witness for |x-y|^2")?;
    Ok(format!(
        "p=0.5 witness 4 > 2; |x-y|^2 witness magnitude {:.3}",
        sq.magnitude
    ))
}

fn limit_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tau = Tau::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let x: Vec<f64> = y
            .iter()
            .map(|&yi| {
                if rng.gen_bool(0.4) {
                    yi
                } else {
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    yi + sign * rng.gen_range(0.5..=2.0)
                }
            })
            .collect();
        let (x, y) = (Vector::new(x).unwrap(), Vector::new(y).unwrap());
        let d0 = support_distance(&x, &y, tau).unwrap() as f64;
        let ds = ds_distance(0.001, &x, &y).unwrap();
        let gap = (ds - d0).abs();
        ensure(gap <= 1e-3 * n as f64, format!("gap {gap} at n = {n}"))?;
        worst = worst.max(gap / n as f64);
    }

    let s_list = [1.0, 0.5, 0.25, 0.1, 0.01, 0.001];
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-50..50) as f64).collect();
        let x: Vec<f64> = y.iter().map(|&v| v + rng.gen_range(0..=1) as f64).collect();
        let (x, y) = (Vector::new(x).unwrap(), Vector::new(y).unwrap());
        let scan = limit_scan(&x, &y, &s_list, tau).unwrap();
        for p in &scan.trajectory {
            ensure(
                p.value == scan.support as f64,
                format!("{{0,1}} trajectory {} != {}", p.value, scan.support),
            )?;
        }
    }
    Ok(format!("max |d_0.001 - d_0| / n = {worst:.2e}; 0/1 trajectories exact"))
}

fn ball_nesting() -> Outcome {
    let fine = ball_nesting_check(0.5, 0.25, 0.75, 2, 10_000, 11).map_err(|e| e.to_string())?;
    ensure(
        fine.direction == NestingDirection::FineInsideCoarse,
        "r = 0.5 direction",
    )?;
    ensure(
        fine.counterexamples.is_empty(),
        format!("r = 0.5 counterexample {:?}", fine.counterexamples.first()),
    )?;
    let coarse = ball_nesting_check(3.0, 0.25, 0.75, 2, 10_000, 12).map_err(|e| e.to_string())?;
    ensure(
        coarse.direction == NestingDirection::CoarseInsideFine,
        "r = 3 direction",
    )?;
    ensure(
        coarse.counterexamples.is_empty(),
        format!("r = 3 counterexample {:?}", coarse.counterexamples.first()),
    )?;
    match ball_nesting_check(1.5, 0.25, 0.75, 2, 10_000, 13) {
        Err(Error::NoInclusionRegime { .. }) => {}
        other => return Err(format!("r = 1.5 gave {other:?}")),
    }
    Ok(format!(
        "r=0.5: {} hits, r=3: {} hits, 0 counterexamples; r=1.5 no-inclusion",
        fine.antecedent_hits, coarse.antecedent_hits
    ))
}

fn alt_ball_grid() -> Outcome {
    let tau = Tau::default();
    let metric = ProductMetric::new(
        vec![ScalarMetric::discrete(), ScalarMetric::Absolute],
        Order::Finite(1.0),
    )
    .unwrap();
    let center = Vector::zeros(2).unwrap();
    for r in [0.5, 1.0, 1.5] {
        let ball = Ball::closed(center.clone(), r, BallMetric::Product { metric: metric.clone() }).unwrap();
        let mut disagreements = 0;
        for i in 0..201 {
            for j in 0..201 {
                let p = [(i as f64 - 100.0) / 50.0, (j as f64 - 100.0) / 50.0];
                let generic = ball.contains(&Vector::from_slice(&p).unwrap()).unwrap();
                if generic != alt_ball_contains(r, p, tau) {
                    disagreements += 1;
                }
            }
        }
        ensure(disagreements == 0, format!("r = {r}: {disagreements} disagreements"))?;
    }
    Ok("201x201 grid, r in {0.5, 1, 1.5}, 0 disagreements".into())
}

fn boundary_contract() -> Outcome {
    let origin = Vector::zeros(2).unwrap();
    let mut total = 0;
    for order in [
        Order::Finite(1.0),
        Order::Finite(1.5),
        Order::Finite(2.0),
        Order::Finite(4.0),
        Order::Infinity,
    ] {
        let metric = ProductMetric::homogeneous(ScalarMetric::Absolute, 2, order).unwrap();
        let ball = Ball::closed(origin.clone(), 1.0, BallMetric::Product { metric: metric.clone() }).unwrap();
        let pts = ball_boundary_sample_2d(&ball, 720, 1e-9).map_err(|e| e.to_string())?;
        for b in &pts {
            let d = metric.eval(&[b.x, b.y], &[0.0, 0.0]);
            ensure(
                (d - 1.0).abs() <= 1e-9,
                format!("p = {order}, theta = {}: d = {d}", b.theta),
            )?;
            if order == Order::Finite(2.0) {
                let (c, s) = (b.theta.cos(), b.theta.sin());
                ensure(
                    (b.x - c).abs() <= 1e-9 && (b.y - s).abs() <= 1e-9,
                    format!("p = 2 point ({}, {}) off the circle", b.x, b.y),
                )?;
            }
        }
        total += pts.len();
    }
    Ok(format!("{total} boundary samples within 1e-9"))
}

fn convexity_dichotomy() -> Outcome {
    let domain = SampleBox::new(2, -10.0, 10.0).unwrap();
    for p in [1.0, 2.0] {
        let g = Gauge::fp(p).unwrap();
        let report = check_convexity(|x: &[f64]| g.value(x), &domain, 10_000, 1e-9, 5).map_err(|e| e.to_string())?;
        ensure(report.is_clean(), format!("f_{p} violation {:?}", report.violation))?;
    }
    let magnitude = |g: Gauge| -> Result<f64, String> {
        let report = check_convexity(|x: &[f64]| g.value(x), &domain, 10_000, 1e-9, 5).map_err(|e| e.to_string())?;
        let v = report.violation.ok_or(format!("no violation for {g}"))?;
        ensure(v.t == 0.5, format!("{g} witness is not a midpoint"))?;
        Ok(v.magnitude)
    };
    let fm = magnitude(Gauge::fp(0.5).unwrap())?;
    ensure((fm - 1.0).abs() <= 1e-12, format!("f_0.5 magnitude {fm}"))?;
    let gm = magnitude(Gauge::gs(0.5).unwrap())?;
    ensure(
        (gm - (2f64.sqrt() - 1.0)).abs() <= 1e-12,
        format!("g_0.5 magnitude {gm}"),
    )?;

    let tested = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0];
    for p in tested {
        let g = Gauge::fp(p).unwrap();
        let report = check_homogeneity(|x: &[f64]| g.value(x), 3, 10_000, 1e-9, 6).map_err(|e| e.to_string())?;
        ensure(report.is_clean(), format!("f_{p} homogeneity {:?}", report.violation))?;
    }
    let g = Gauge::gs(0.5).unwrap();
    let report = check_homogeneity(|x: &[f64]| g.value(x), 3, 10_000, 1e-9, 6).map_err(|e| e.to_string())?;
    let v = report.violation.ok_or("g_0.5 passed homogeneity")?;
    ensure(
        v.magnitude == 2.0,
        format!("g_0.5 homogeneity magnitude {}", v.magnitude),
    )?;
    Ok(format!(
        "f_1, f_2 convex; f_0.5 gap {fm}, g_0.5 gap {gm:.6}; f_p homogeneous for {} exponents; g_0.5 gap 2",
        tested.len()
    ))
}

fn minkowski() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for dim in [2, 5] {
        for order in orders() {
            let body = ConvexBody::open_unit_ball(order, dim).unwrap();
            for _ in 0..1000 {
                let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect();
                let want = norm(&x, order);
                let got = minkowski_functional(&body, &Vector::new(x).unwrap(), 1e-6).map_err(|e| e.to_string())?;
                let err = (got - want).abs();
                ensure(err <= 2e-6, format!("p = {order}, dim {dim}: {got} vs {want}"))?;
                worst = worst.max(err);
            }
        }
    }
    Ok(format!("6000 points, max error {worst:.2e}"))
}

fn random_set<R: Rng>(rng: &mut R) -> PointSet {
    let n = rng.gen_range(1..=8);
    PointSet::from_rows(
        (0..n)
            .map(|_| vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])
            .collect(),
    )
    .unwrap()
}

fn hausdorff_suite() -> Outcome {
    let line = ProductMetric::homogeneous(ScalarMetric::Absolute, 1, Order::Finite(1.0)).unwrap();
    let k = PointSet::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
    let a = PointSet::from_rows(vec![vec![2.0]]).unwrap();
    let h = hausdorff(&k, &a, &line).unwrap();
    ensure(h == 2.0, format!("h({{0,1}},{{2}}) = {h}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for order in orders() {
        let metric = ProductMetric::homogeneous(ScalarMetric::Absolute, 2, order).unwrap();
        for _ in 0..1000 {
            let (a, b, c) = (random_set(&mut rng), random_set(&mut rng), random_set(&mut rng));
            let ab = hausdorff(&a, &b, &metric).unwrap();
            let ba = hausdorff(&b, &a, &metric).unwrap();
            ensure(ab.to_bits() == ba.to_bits(), format!("asymmetric: {ab} vs {ba}"))?;
            let ac = hausdorff(&a, &c, &metric).unwrap();
            let cb = hausdorff(&c, &b, &metric).unwrap();
            ensure(ab <= ac + cb + 1e-12, format!("triangle: {ab} > {ac} + {cb}"))?;
        }
    }
    Ok("h({0,1},{2}) = 2; 3000 set triples symmetric and triangle-consistent".into())
}

fn sparse_recovery() -> Outcome {
    let opts = L0Options::default();
    let example = LinearSystem::from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]], &[1.0, 1.0]).unwrap();
    let sol = l0_min_bruteforce(&example, &opts).map_err(|e| e.to_string())?;
    ensure(
        sol.support == vec![2],
        format!("2x3 example support {:?} (0-based)", sol.support),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for instance in 0..20 {
        let a = DMatrix::from_fn(5, 8, |_, _| rng.sample::<f64, _>(StandardNormal));
        let mut planted: Vec<usize> = sample(&mut rng, 8, 2).into_vec();
        planted.sort_unstable();
        let mut x = DVector::zeros(8);
        for &i in &planted {
            x[i] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        }
        let b = &a * &x;
        let sys = LinearSystem::new(a, b).unwrap();
        let sol = l0_min_bruteforce(&sys, &opts).map_err(|e| e.to_string())?;
        ensure(
            sol.support == planted,
            format!("instance {instance}: support {:?}, planted {planted:?}", sol.support),
        )?;
        ensure(
            sol.residual <= 1e-8,
            format!("instance {instance}: residual {}", sol.residual),
        )?;
        worst = worst.max(sol.residual);
    }

    let report = surrogate_ranking_experiment(&example, 0.5, 100, 0, &opts).map_err(|e| e.to_string())?;
    ensure(report.agreement, "surrogate s = 0.5 disagrees on the 2x3 example")?;
    Ok(format!(
        "2x3 support {{3}}; 20/20 planted supports, max residual {worst:.1e}; surrogate agrees"
    ))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sparsemetric"))
        .env_remove("TAU")
        .env_remove("RESIDUAL_TOL")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(
        out.status.success(),
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)),
    )?;
    Ok(out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = |name: &str, text: &str| -> String {
        let path = dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_owned()
    };
    let a = file("a.csv", "1,0,1\n0,1,1\n");
    let b = file("b.csv", "1\n1\n");
    let k = file("k.csv", "0,0\n1,2\n");
    let s = file("s.csv", "2,1\n-1,0\n3,3\n");
    let pts = file("pts.csv", "1,2\n-3,0.5\n");
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "metric-eval",
            "--metric",
            "pow:0.5,disc,abs",
            "--p",
            "2",
            "--x",
            "0,1,2",
            "--y",
            "1,1,-2",
            "--json",
        ],
        vec![
            "axioms-check",
            "--metric",
            "pow:0.25",
            "--p",
            "inf",
            "--dim",
            "3",
            "--trials",
            "2000",
            "--seed",
            "4",
        ],
        vec![
            "axioms-check",
            "--gauge",
            "fp:0.5",
            "--dim",
            "2",
            "--trials",
            "500",
            "--seed",
            "4",
        ],
        vec![
            "ball-sample",
            "--metric",
            "pow:0.5",
            "--p",
            "1",
            "--r",
            "1",
            "--dirs",
            "90",
        ],
        vec![
            "ball-nest",
            "--r",
            "0.5",
            "--s-fine",
            "0.25",
            "--s-coarse",
            "0.75",
            "--samples",
            "2000",
            "--seed",
            "9",
        ],
        vec!["limit-scan", "--x", "0.5,0,2", "--y", "0,0,1"],
        vec![
            "convexity-check",
            "--gauge",
            "gs:0.5",
            "--trials",
            "2000",
            "--seed",
            "2",
        ],
        vec![
            "homogeneity-check",
            "--gauge",
            "fp:3",
            "--trials",
            "2000",
            "--seed",
            "2",
        ],
        vec!["hausdorff", "--k", &k, "--a", &s, "--metric", "abs", "--p", "2"],
        vec!["minkowski", "--body-p", "2", "--points", &pts],
        vec!["sparse-solve", "--A", &a, "--b", &b],
        vec![
            "surrogate-rank",
            "--A",
            &a,
            "--b",
            &b,
            "--samples",
            "40",
            "--seed",
            "17",
        ],
    ];
    for args in &invocations {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        ensure(!first.is_empty(), format!("{}: empty output", args[0]))?;
        ensure(first == second, format!("{}: outputs differ", args[0]))?;
    }
    Ok(format!("{} invocations byte-identical across runs", invocations.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("metric axioms", metric_axioms),
        ("non-metric witnesses", non_metric_witnesses),
        ("limit law", limit_law),
        ("ball nesting", ball_nesting),
        ("alt ball grid", alt_ball_grid),
        ("boundary contract", boundary_contract),
        ("convexity dichotomy", convexity_dichotomy),
        ("minkowski functional", minkowski),
        ("hausdorff", hausdorff_suite),
        ("sparse recovery", sparse_recovery),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
