use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};
use sparsemetric::ball::{ball_boundary_sample_2d, ball_nesting_check, Ball};
use sparsemetric::gauge::{check_convexity, check_homogeneity, minkowski_functional, norm, ConvexBody, Gauge};
use sparsemetric::hausdorff::{directed_hausdorff, PointSet};
use sparsemetric::metric::{check_metric_axioms, SampleBox};
use sparsemetric::product::{limit_scan, product_distance};
use sparsemetric::sparse::{
    l0_min_bruteforce, surrogate_ranking_experiment, L0Options, LinearSystem, DEFAULT_RESIDUAL_TOL,
};
use sparsemetric::{Order, ProductMetric, ScalarMetric, Tau, Vector, DEFAULT_TAU};

use crate::args::*;
use crate::io::{read_rows, read_vector, CliError};

type Outcome = Result<(String, Option<PathBuf>), CliError>;

fn env_default(var: &str, fallback: f64) -> Result<f64, CliError> {
    match std::env::var(var) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("environment variable {var}=`{raw}` is not a number"))),
        Err(_) => Ok(fallback),
    }
}

fn resolve_tau(flag: Option<f64>) -> Result<Tau, CliError> {
    let raw = match flag {
        Some(t) => t,
        None => env_default("TAU", DEFAULT_TAU)?,
    };
    Tau::new(raw).map_err(|e| CliError::Usage(e.to_string()))
}

fn resolve_residual_tol(flag: Option<f64>) -> Result<f64, CliError> {
    match flag {
        Some(t) => Ok(t),
        None => env_default("RESIDUAL_TOL", DEFAULT_RESIDUAL_TOL),
    }
}

/// One descriptor per coordinate; a single descriptor is repeated `dim` times.
fn resolve_metric(list: &[ScalarMetric], order: Order, dim: usize, tau: Tau) -> Result<ProductMetric, CliError> {
    let with_tau = |m: &ScalarMetric| match m {
        ScalarMetric::Discrete { .. } => ScalarMetric::discrete_with_tau(tau),
        other => *other,
    };
    let components: Vec<ScalarMetric> = if list.len() == 1 {
        vec![with_tau(&list[0]); dim]
    } else {
        list.iter().map(with_tau).collect()
    };
    Ok(ProductMetric::new(components, order)?)
}

/// Shortest round-trip representation; exponent form outside `[1e-5, 1e16)`.
fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn record(command: &str, config: Value, result: Value) -> String {
    let mut text = json!({ "command": command, "config": config, "result": result }).to_string();
    text.push('\n');
    text
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::MetricEval(a) => metric_eval(a),
        Command::AxiomsCheck(a) => axioms_check(a),
        Command::BallSample(a) => ball_sample(a),
        Command::BallNest(a) => ball_nest(a),
        Command::LimitScan(a) => limit_scan_cmd(a),
        Command::ConvexityCheck(a) => gauge_check(a, true),
        Command::HomogeneityCheck(a) => gauge_check(a, false),
        Command::Hausdorff(a) => hausdorff_cmd(a),
        Command::Minkowski(a) => minkowski(a),
        Command::SparseSolve(a) => sparse_solve(a),
        Command::SurrogateRank(a) => surrogate_rank(a),
    }
}

fn metric_eval(a: MetricEvalArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let x = Vector::new(a.x.clone())?;
    let y = Vector::new(a.y.clone())?;
    let spec = resolve_metric(&a.metric.metric, a.metric.p, x.dim(), tau)?;
    let d = product_distance(&spec, &x, &y)?;
    let text = if a.json {
        record(
            "metric-eval",
            json!({ "metric": to_value(&spec), "x": a.x, "y": a.y, "tau": tau.get() }),
            json!({ "distance": d }),
        )
    } else {
        format!("{}\n", fmt_num(d))
    };
    Ok((text, a.common.out))
}

fn axioms_check(a: AxiomsCheckArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let (report, metric_config, dim) = match (&a.metric, a.gauge) {
        (Some(list), None) => {
            let dim = a.dim.unwrap_or(list.len());
            let spec = resolve_metric(list, a.p, dim, tau)?;
            let domain = SampleBox::new(spec.dim(), a.lo, a.hi)?;
            let report = check_metric_axioms(&spec, &domain, a.trials, a.tol, a.seed)?;
            (report, json!({ "product": to_value(&spec) }), spec.dim())
        }
        (None, Some(gauge)) => {
            let dim = a
                .dim
                .ok_or_else(|| CliError::Usage("--dim is required with --gauge".into()))?;
            let domain = SampleBox::new(dim, a.lo, a.hi)?;
            let d = |x: &[f64], y: &[f64]| {
                let diff: Vec<f64> = x.iter().zip(y).map(|(u, v)| u - v).collect();
                gauge.value(&diff)
            };
            let report = check_metric_axioms(&d, &domain, a.trials, a.tol, a.seed)?;
            (report, json!({ "gauge": to_value(&gauge) }), dim)
        }
        _ => return Err(CliError::Usage("give exactly one of --metric or --gauge".into())),
    };
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for v in &report.violations {
        *counts
            .entry(to_value(&v.axiom).as_str().unwrap_or_default().to_owned())
            .or_default() += 1;
    }
    let witnesses: Vec<Value> = report.violations.iter().take(a.max_witnesses).map(to_value).collect();
    let text = record(
        "axioms-check",
        json!({
            "metric": metric_config, "dim": dim, "lo": a.lo, "hi": a.hi,
            "trials": a.trials, "tol": a.tol, "seed": a.seed, "tau": tau.get(),
        }),
        json!({
            "trials_run": report.trials_run,
            "clean": report.is_clean(),
            "violation_count": report.violations.len(),
            "violations_by_axiom": counts,
            "witnesses": witnesses,
        }),
    );
    Ok((text, a.common.out))
}

fn ball_sample(a: BallSampleArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let center = Vector::new(a.center)?;
    let spec = resolve_metric(&a.metric.metric, a.metric.p, center.dim(), tau)?;
    let ball = Ball::closed(center, a.r, spec.into())?;
    let points = ball_boundary_sample_2d(&ball, a.dirs, a.tol)?;
    let mut text = String::new();
    for p in points {
        text.push_str(&format!("{},{},{}\n", fmt_num(p.theta), fmt_num(p.x), fmt_num(p.y)));
    }
    Ok((text, a.common.out))
}

fn ball_nest(a: BallNestArgs) -> Outcome {
    let report = ball_nesting_check(a.r, a.s_fine, a.s_coarse, a.dim, a.samples, a.seed)?;
    let text = record(
        "ball-nest",
        json!({
            "r": a.r, "s_fine": a.s_fine, "s_coarse": a.s_coarse,
            "dim": a.dim, "samples": a.samples, "seed": a.seed,
        }),
        to_value(&report),
    );
    Ok((text, a.common.out))
}

fn limit_scan_cmd(a: LimitScanArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let x = Vector::new(a.x)?;
    let y = match a.y {
        Some(y) => Vector::new(y)?,
        None => Vector::zeros(x.dim())?,
    };
    let scan = limit_scan(&x, &y, &a.s, tau)?;
    let text = record(
        "limit-scan",
        json!({ "x": to_value(&x), "y": to_value(&y), "s": a.s, "tau": tau.get() }),
        json!({
            "trajectory": to_value(&scan.trajectory),
            "d0": scan.support,
            "max_gap": scan.max_gap(),
        }),
    );
    Ok((text, a.common.out))
}

fn gauge_check(a: GaugeCheckArgs, convexity: bool) -> Outcome {
    let gauge: Gauge = a.gauge;
    let f = |x: &[f64]| gauge.value(x);
    let (command, result, config) = if convexity {
        let domain = SampleBox::new(a.dim, a.lo, a.hi)?;
        let report = check_convexity(f, &domain, a.trials, a.tol, a.seed)?;
        (
            "convexity-check",
            json!({
                "clean": report.is_clean(),
                "violation": to_value(&report.violation),
                "non_finite": report.non_finite,
                "trials_run": report.trials_run,
            }),
            json!({
                "gauge": to_value(&gauge), "dim": a.dim, "lo": a.lo, "hi": a.hi,
                "trials": a.trials, "tol": a.tol, "seed": a.seed,
            }),
        )
    } else {
        let report = check_homogeneity(f, a.dim, a.trials, a.tol, a.seed)?;
        (
            "homogeneity-check",
            json!({
                "clean": report.is_clean(),
                "violation": to_value(&report.violation),
                "trials_run": report.trials_run,
            }),
            json!({
                "gauge": to_value(&gauge), "dim": a.dim,
                "trials": a.trials, "tol": a.tol, "seed": a.seed,
            }),
        )
    };
    Ok((record(command, config, result), a.common.out))
}

fn hausdorff_cmd(a: HausdorffArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let k = PointSet::from_rows(read_rows(&a.k)?)?;
    let set_a = PointSet::from_rows(read_rows(&a.a)?)?;
    let spec = resolve_metric(&a.metric.metric, a.metric.p, k.dim(), tau)?;
    let forward = directed_hausdorff(&k, &set_a, &spec)?;
    let backward = directed_hausdorff(&set_a, &k, &spec)?;
    let text = record(
        "hausdorff",
        json!({
            "k": a.k.display().to_string(), "a": a.a.display().to_string(),
            "metric": to_value(&spec), "tau": tau.get(),
        }),
        json!({
            "hausdorff": forward.max(backward),
            "directed_k_to_a": forward,
            "directed_a_to_k": backward,
            "k_points": k.len(),
            "a_points": set_a.len(),
        }),
    );
    Ok((text, a.common.out))
}

fn minkowski(a: MinkowskiArgs) -> Outcome {
    let points: Vec<Vec<f64>> = match (&a.x, &a.points) {
        (Some(x), None) => vec![x.clone()],
        (None, Some(path)) => read_rows(path)?,
        _ => return Err(CliError::Usage("give exactly one of --x or --points".into())),
    };
    let dim = points[0].len();
    let body = ConvexBody::open_unit_ball(a.body_p, dim)?;
    let results = points
        .into_iter()
        .map(|row| {
            let x = Vector::new(row)?;
            if x.dim() != dim {
                return Err(sparsemetric::Error::DimensionMismatch {
                    expected: dim,
                    found: x.dim(),
                }
                .into());
            }
            let value = minkowski_functional(&body, &x, a.tol)?;
            Ok(json!({ "x": to_value(&x), "value": value, "p_norm": norm(&x, a.body_p) }))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    let text = record(
        "minkowski",
        json!({
            "body": { "p": to_value(&a.body_p), "dim": dim, "open": true },
            "inner_radius": body.inner_radius(),
            "outer_radius": body.outer_radius(),
            "tol": a.tol,
        }),
        json!({ "points": results }),
    );
    Ok((text, a.common.out))
}

fn load_system(s: &SystemArgs) -> Result<LinearSystem, CliError> {
    let rows = read_rows(&s.a)?;
    let b = read_vector(&s.b)?;
    Ok(LinearSystem::from_rows(&rows, &b)?)
}

fn l0_options(s: &SystemArgs, tau: Tau) -> Result<L0Options, CliError> {
    Ok(L0Options {
        residual_tol: resolve_residual_tol(s.residual_tol)?,
        max_support: s.max_support,
        tau,
    })
}

fn one_based(support: &[usize]) -> Vec<usize> {
    support.iter().map(|i| i + 1).collect()
}

fn system_config(s: &SystemArgs, sys: &LinearSystem, opts: &L0Options) -> Value {
    json!({
        "A": s.a.display().to_string(),
        "b": s.b.display().to_string(),
        "rows": sys.rows(),
        "cols": sys.cols(),
        "residual_tol": opts.residual_tol,
        "max_support": opts.max_support.unwrap_or(sys.cols()),
        "tau": opts.tau.get(),
    })
}

fn sparse_solve(a: SparseSolveArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let sys = load_system(&a.system)?;
    let opts = l0_options(&a.system, tau)?;
    let sol = l0_min_bruteforce(&sys, &opts)?;
    let text = record(
        "sparse-solve",
        system_config(&a.system, &sys, &opts),
        json!({
            "x": to_value(&sol.x),
            "support": one_based(&sol.support),
            "support_size": sol.support.len(),
            "residual": sol.residual,
        }),
    );
    Ok((text, a.common.out))
}

fn surrogate_rank(a: SurrogateRankArgs) -> Outcome {
    let tau = resolve_tau(a.common.tau)?;
    let sys = load_system(&a.system)?;
    let opts = l0_options(&a.system, tau)?;
    let report = surrogate_ranking_experiment(&sys, a.s, a.samples, a.seed, &opts)?;
    let mut config = system_config(&a.system, &sys, &opts);
    config["s"] = json!(a.s);
    config["samples"] = json!(a.samples);
    config["seed"] = json!(a.seed);
    let text = record(
        "surrogate-rank",
        config,
        json!({
            "agreement": report.agreement,
            "surrogate_minimizer": to_value(&report.surrogate_minimizer),
            "surrogate_support": one_based(&report.surrogate_support),
            "l0_minimizer": to_value(&report.l0_minimizer.x),
            "l0_support": one_based(&report.l0_minimizer.support),
            "l0_residual": report.l0_minimizer.residual,
            "table": to_value(&report.table),
        }),
    );
    Ok((text, a.common.out))
}
