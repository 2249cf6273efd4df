//! p-norms and the power gauges `f_p` and `g_s`, randomized falsification of
//! convexity and homogeneity, the norm/metric bridges, and the Minkowski
//! functional of a convex body.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{seeded_rng, Distance, SampleBox};
use crate::product::Order;
use crate::vector::Vector;

/// `‖x‖_p` for an already validated order.
pub fn norm(x: &[f64], order: Order) -> f64 {
    order.combine(x.iter().map(|v| v.abs()))
}

/// `‖x‖_p`; `p` must be at least 1 (use [`Gauge`] below that).
pub fn p_norm(x: &Vector, p: f64) -> Result<f64> {
    Ok(norm(x, Order::new(p)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeFamily {
    /// `(Σ |xᵢ|^p)^{1/p}`
    Fp,
    /// `Σ |xᵢ|^s`
    Gs,
}

/// One of the two power gauges, for any positive exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gauge {
    family: GaugeFamily,
    exponent: f64,
}

impl Gauge {
    pub fn new(family: GaugeFamily, exponent: f64) -> Result<Self> {
        if exponent.is_finite() && exponent > 0.0 {
            Ok(Self { family, exponent })
        } else {
            Err(Error::InvalidGaugeExponent(exponent))
        }
    }

    pub fn fp(p: f64) -> Result<Self> {
        Self::new(GaugeFamily::Fp, p)
    }

    pub fn gs(s: f64) -> Result<Self> {
        Self::new(GaugeFamily::Gs, s)
    }

    pub fn family(&self) -> GaugeFamily {
        self.family
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let e = self.exponent;
        match self.family {
            GaugeFamily::Gs => x
                .iter()
                .map(|v| {
                    let a = v.abs();
                    if a == 0.0 {
                        0.0
                    } else {
                        a.powf(e)
                    }
                })
                .sum(),
            GaugeFamily::Fp if e == 1.0 || e == 2.0 => norm(x, Order::Finite(e)),
            GaugeFamily::Fp => {
                let scale = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
                if scale == 0.0 {
                    return 0.0;
                }
                let sum: f64 = x.iter().map(|v| (v.abs() / scale).powf(e)).sum();
                scale * sum.powf(e.recip())
            }
        }
    }
}

/// Free-function form of [`Gauge::value`].
pub fn gauge_value(spec: &Gauge, x: &Vector) -> f64 {
    spec.value(x)
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.family {
            GaugeFamily::Fp => "fp",
            GaugeFamily::Gs => "gs",
        };
        write!(f, "{tag}:{}", self.exponent)
    }
}

/// Parses `fp:<p>` or `gs:<s>`.
impl FromStr for Gauge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, rest) = if let Some(rest) = s.strip_prefix("fp:") {
            (GaugeFamily::Fp, rest)
        } else if let Some(rest) = s.strip_prefix("gs:") {
            (GaugeFamily::Gs, rest)
        } else {
            return Err(Error::InvalidParameter(format!("unknown gauge descriptor `{s}`")));
        };
        let e: f64 = rest
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("invalid gauge exponent `{rest}`")))?;
        Self::new(family, e)
    }
}

/// A chord along which `f` rises above the secant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityViolation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
    /// `f(t·x + (1-t)·y)`
    pub lhs: f64,
    /// `t·f(x) + (1-t)·f(y)`
    pub rhs: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub violation: Option<ConvexityViolation>,
    /// First point where `f` was NaN or infinite.
    pub non_finite: Option<Vec<f64>>,
    pub trials_run: usize,
}

impl ConvexityReport {
    pub fn is_clean(&self) -> bool {
        self.violation.is_none() && self.non_finite.is_none()
    }
}

fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

/// Randomized search for a violation of `f(tx + (1-t)y) <= t f(x) + (1-t) f(y) + tol`.
///
/// The midpoints of the unit-vector pairs `(eᵢ, eⱼ)` are tried before the
/// `trials` random triples (`x`, `y` uniform in `domain`, `t` uniform in
/// `[0, 1]`). Stops at the first violation.
pub fn check_convexity<F>(f: F, domain: &SampleBox, trials: usize, tol: f64, seed: u64) -> Result<ConvexityReport>
where
    F: Fn(&[f64]) -> f64,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let dim = domain.dim();
    let mut report = ConvexityReport {
        violation: None,
        non_finite: None,
        trials_run: 0,
    };
    let probe = |x: Vec<f64>, y: Vec<f64>, t: f64, report: &mut ConvexityReport| -> bool {
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let (fx, fy, fm) = (f(&x), f(&y), f(&mid));
        report.trials_run += 1;
        for (value, point) in [(fx, &x), (fy, &y), (fm, &mid)] {
            if !value.is_finite() {
                report.non_finite = Some(point.clone());
                return true;
            }
        }
        let rhs = t * fx + (1.0 - t) * fy;
        if fm > rhs + tol {
            report.violation = Some(ConvexityViolation {
                x,
                y,
                t,
                lhs: fm,
                rhs,
                magnitude: fm - rhs,
            });
            return true;
        }
        false
    };

    for i in 0..dim {
        for j in i + 1..dim {
            if probe(unit(dim, i), unit(dim, j), 0.5, &mut report) {
                return Ok(report);
            }
        }
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..trials {
        let x = domain.sample(&mut rng);
        let y = domain.sample(&mut rng);
        let t: f64 = rng.gen();
        if probe(x, y, t, &mut report) {
            break;
        }
    }
    Ok(report)
}

/// `f(λx)` differs from `|λ|·f(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityViolation {
    pub x: Vec<f64>,
    pub lambda: f64,
    /// `f(λx)`
    pub lhs: f64,
    /// `|λ|·f(x)`
    pub rhs: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub violation: Option<HomogeneityViolation>,
    pub trials_run: usize,
}

impl HomogeneityReport {
    pub fn is_clean(&self) -> bool {
        self.violation.is_none()
    }
}

const HOMOGENEITY_PROBES: [f64; 4] = [4.0, -3.0, 2.0, 0.5];

#[inline]
fn relative_gap(lhs: f64, rhs: f64, tol: f64) -> Option<f64> {
    let gap = (lhs - rhs).abs();
    (gap > tol * rhs.abs().max(1.0) || gap.is_nan()).then_some(gap)
}

/// Randomized search for a violation of `f(λx) = |λ| f(x)`.
///
/// Tries `x = e₁` with `λ ∈ {4, -3, 2, 0.5}` first, then `trials` random
/// pairs with `x ∈ [-1, 1]^dim` and `λ ∈ [-10, 10]`. The comparison is
/// relative: a gap counts when it exceeds `tol · max(1, |λ| f(x))`.
pub fn check_homogeneity<F>(f: F, dim: usize, trials: usize, tol: f64, seed: u64) -> Result<HomogeneityReport>
where
    F: Fn(&[f64]) -> f64,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let domain = SampleBox::new(dim, -1.0, 1.0)?;
    let mut report = HomogeneityReport {
        violation: None,
        trials_run: 0,
    };
    let probe = |x: Vec<f64>, lambda: f64, report: &mut HomogeneityReport| -> bool {
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let lhs = f(&scaled);
        let rhs = lambda.abs() * f(&x);
        report.trials_run += 1;
        if let Some(gap) = relative_gap(lhs, rhs, tol) {
            report.violation = Some(HomogeneityViolation {
                x,
                lambda,
                lhs,
                rhs,
                magnitude: gap,
            });
            return true;
        }
        false
    };

    for lambda in HOMOGENEITY_PROBES {
        if probe(unit(dim, 0), lambda, &mut report) {
            return Ok(report);
        }
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..trials {
        let x = domain.sample(&mut rng);
        let lambda = rng.gen_range(-10.0..=10.0);
        if probe(x, lambda, &mut report) {
            break;
        }
    }
    Ok(report)
}

/// `d(x, y) = ‖x - y‖_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormMetric {
    order: Order,
}

impl NormMetric {
    pub fn order(&self) -> Order {
        self.order
    }
}

impl Distance for NormMetric {
    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.order.combine(x.iter().zip(y).map(|(a, b)| (a - b).abs()))
    }
}

/// The metric induced by the p-norm.
pub fn metric_from_norm(order: Order) -> NormMetric {
    NormMetric { order }
}

/// The gauge `x ↦ d(x, 0)` of a metric that passed the norm-induction checks.
#[derive(Debug, Clone)]
pub struct InducedGauge<D> {
    metric: D,
    origin: Vec<f64>,
}

impl<D: Distance> InducedGauge<D> {
    pub fn value(&self, x: &[f64]) -> f64 {
        self.metric.distance(x, &self.origin)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn into_metric(self) -> D {
        self.metric
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormProperty {
    /// `d(x + z, y + z) = d(x, y)`
    Translation,
    /// `d(λx, 0) = |λ| d(x, 0)`
    Homogeneity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormFailure {
    pub property: NormProperty,
    /// `[x, y, z]` for translation, `[x]` for homogeneity.
    pub points: Vec<Vec<f64>>,
    /// Scale factor, homogeneity only.
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone)]
pub enum NormCandidate<D> {
    IsNormInduced(InducedGauge<D>),
    FailureWitness(NormFailure),
}

impl<D> NormCandidate<D> {
    pub fn failure(&self) -> Option<&NormFailure> {
        match self {
            Self::FailureWitness(f) => Some(f),
            Self::IsNormInduced(_) => None,
        }
    }
}

/// Tests whether `d` behaves like `‖x - y‖` for some norm: translation
/// invariance and absolute homogeneity on samples. Deterministic probes
/// along `e₁` come first, then `trials` random draws from `[-5, 5]^dim`
/// with `λ ∈ [-10, 10]`. Gaps are compared relatively, as in
/// [`check_homogeneity`].
pub fn norm_candidate_from_metric<D: Distance>(
    d: D,
    dim: usize,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<NormCandidate<D>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let domain = SampleBox::new(dim, -5.0, 5.0)?;
    let origin = vec![0.0; dim];

    let translation = |x: &[f64], y: &[f64], z: &[f64]| -> Option<NormFailure> {
        let xz: Vec<f64> = x.iter().zip(z).map(|(a, b)| a + b).collect();
        let yz: Vec<f64> = y.iter().zip(z).map(|(a, b)| a + b).collect();
        let lhs = d.distance(&xz, &yz);
        let rhs = d.distance(x, y);
        relative_gap(lhs, rhs, tol).map(|gap| NormFailure {
            property: NormProperty::Translation,
            points: vec![x.to_vec(), y.to_vec(), z.to_vec()],
            lambda: None,
            lhs,
            rhs,
            magnitude: gap,
        })
    };
    let homogeneity = |x: &[f64], lambda: f64| -> Option<NormFailure> {
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let lhs = d.distance(&scaled, &origin);
        let rhs = lambda.abs() * d.distance(x, &origin);
        relative_gap(lhs, rhs, tol).map(|gap| NormFailure {
            property: NormProperty::Homogeneity,
            points: vec![x.to_vec()],
            lambda: Some(lambda),
            lhs,
            rhs,
            magnitude: gap,
        })
    };

    let e1 = unit(dim, 0);
    let shift = vec![0.5; dim];
    let mut failure = translation(&e1, &origin, &shift);
    for lambda in HOMOGENEITY_PROBES {
        if failure.is_some() {
            break;
        }
        failure = homogeneity(&e1, lambda);
    }
    if failure.is_none() {
        let mut rng = seeded_rng(seed);
        for _ in 0..trials {
            let x = domain.sample(&mut rng);
            let y = domain.sample(&mut rng);
            let z = domain.sample(&mut rng);
            let lambda = rng.gen_range(-10.0..=10.0);
            failure = translation(&x, &y, &z).or_else(|| homogeneity(&x, lambda));
            if failure.is_some() {
                break;
            }
        }
    }
    Ok(match failure {
        Some(f) => NormCandidate::FailureWitness(f),
        None => NormCandidate::IsNormInduced(InducedGauge { metric: d, origin }),
    })
}

type Membership = Box<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Membership oracle for a convex, symmetric, open body `K` together with
/// Euclidean radii `r <= R` such that `S(0, r) ⊆ K ⊆ S(0, R)`.
pub struct ConvexBody {
    membership: Membership,
    inner_radius: f64,
    outer_radius: f64,
}

impl fmt::Debug for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexBody")
            .field("inner_radius", &self.inner_radius)
            .field("outer_radius", &self.outer_radius)
            .finish_non_exhaustive()
    }
}

impl ConvexBody {
    pub fn new<F>(membership: F, inner_radius: f64, outer_radius: f64) -> Result<Self>
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        if !(inner_radius > 0.0 && inner_radius <= outer_radius && outer_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "convex body radii must satisfy 0 < r <= R < inf, got r={inner_radius}, R={outer_radius}"
            )));
        }
        Ok(Self {
            membership: Box::new(membership),
            inner_radius,
            outer_radius,
        })
    }

    /// The open unit ball of the p-norm in ℝ^dim, with its exact Euclidean
    /// sandwich radii.
    pub fn open_unit_ball(order: Order, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dim must be >= 1".into()));
        }
        let n = dim as f64;
        let exponent = 0.5 - order.as_f64().recip();
        let (r, big_r) = if exponent >= 0.0 {
            (1.0, n.powf(exponent))
        } else {
            (n.powf(exponent), 1.0)
        };
        Self::new(move |y: &[f64]| norm(y, order) < 1.0, r, big_r)
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        (self.membership)(y)
    }

    fn contains_scaled(&self, x: &[f64], lambda: f64) -> bool {
        let y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
        self.contains(&y)
    }
}

const MINKOWSKI_MAX_ITERATIONS: usize = 200;

/// `inf {λ > 0 : x ∈ λK}`, by bisection inside `[‖x‖₂/R, ‖x‖₂/r]` to
/// absolute tolerance `tol`.
pub fn minkowski_functional(body: &ConvexBody, x: &Vector, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let euclid = norm(x, Order::Finite(2.0));
    if euclid == 0.0 {
        return Ok(0.0);
    }
    let mut lo = euclid / body.outer_radius;
    // x/λ must be strictly inside the open inner ball.
    let mut hi = euclid / body.inner_radius + tol;
    if !body.contains_scaled(x, hi) {
        return Err(Error::OracleContract(format!(
            "point not in {hi}·K although it lies inside the inner ball scaled by {hi}"
        )));
    }
    for _ in 0..MINKOWSKI_MAX_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if body.contains_scaled(x, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
