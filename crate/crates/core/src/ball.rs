//! Balls of the product metrics: membership, boundary tracing in the plane,
//! nesting of the `d_s` balls as `s` shrinks, and the degenerate balls of the
//! discrete and support metrics.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{seeded_rng, Distance, PowerExponent, Tau};
use crate::product::{ds_unchecked, support_size, support_unchecked, ProductMetric};
use crate::vector::Vector;

/// Metric a ball is measured in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BallMetric {
    Product {
        metric: ProductMetric,
    },
    /// `d_s(x, y) = Σ |xᵢ - yᵢ|^s`, any dimension.
    Ds {
        s: PowerExponent,
    },
    /// `d_0(x, y) = #{i : xᵢ ≠ yᵢ}`, any dimension.
    Support {
        tau: Tau,
    },
}

impl BallMetric {
    pub fn ds(s: f64) -> Result<Self> {
        Ok(Self::Ds {
            s: PowerExponent::new(s)?,
        })
    }

    pub fn support() -> Self {
        Self::Support { tau: Tau::default() }
    }

    fn fixed_dim(&self) -> Option<usize> {
        match self {
            Self::Product { metric } => Some(metric.dim()),
            _ => None,
        }
    }

    fn is_continuous(&self) -> bool {
        match self {
            Self::Product { metric } => metric.is_continuous(),
            Self::Ds { .. } => true,
            Self::Support { .. } => false,
        }
    }

    /// Largest `|xᵢ - cᵢ|` reachable inside a closed ball of radius `r`,
    /// per coordinate. `None` for unbounded balls.
    fn coordinate_extent(&self, r: f64, dim: usize) -> Option<Vec<f64>> {
        use crate::metric::ScalarMetric;
        match self {
            Self::Product { metric } => metric
                .components()
                .iter()
                .map(|c| match c {
                    ScalarMetric::Absolute => Some(r),
                    ScalarMetric::Power { s } => Some(r.powf(s.get().recip())),
                    ScalarMetric::Discrete { .. } => None,
                })
                .collect(),
            Self::Ds { s } => Some(vec![r.powf(s.get().recip()); dim]),
            Self::Support { .. } => None,
        }
    }
}

impl From<ProductMetric> for BallMetric {
    fn from(metric: ProductMetric) -> Self {
        Self::Product { metric }
    }
}

impl Distance for BallMetric {
    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Self::Product { metric } => metric.eval(x, y),
            Self::Ds { s } => ds_unchecked(s.get(), x, y),
            Self::Support { tau } => support_unchecked(x, y, *tau) as f64,
        }
    }
}

/// An open or closed ball `{x : d(x, center) < r}` / `{x : d(x, center) <= r}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    center: Vector,
    radius: f64,
    metric: BallMetric,
    closed: bool,
}

impl Ball {
    pub fn new(center: Vector, radius: f64, metric: BallMetric, closed: bool) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be finite and non-negative, got {radius}"
            )));
        }
        if let Some(dim) = metric.fixed_dim() {
            center.expect_dim(dim)?;
        }
        Ok(Self {
            center,
            radius,
            metric,
            closed,
        })
    }

    pub fn closed(center: Vector, radius: f64, metric: BallMetric) -> Result<Self> {
        Self::new(center, radius, metric, true)
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn metric(&self) -> &BallMetric {
        &self.metric
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    fn contains_unchecked(&self, point: &[f64]) -> bool {
        let d = self.metric.distance(point, &self.center);
        if self.closed {
            d <= self.radius
        } else {
            d < self.radius
        }
    }

    pub fn contains(&self, point: &Vector) -> Result<bool> {
        point.expect_dim(self.dim())?;
        Ok(self.contains_unchecked(point))
    }
}

/// Free-function form of [`Ball::contains`].
pub fn ball_contains(ball: &Ball, point: &Vector) -> Result<bool> {
    ball.contains(point)
}

/// One point of a traced boundary, at polar angle `theta` about the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub x: f64,
    pub y: f64,
}

const RADIAL_MAX_DOUBLINGS: usize = 1100;
const RADIAL_MAX_BISECTIONS: usize = 100;

/// Traces the boundary `d(p, center) = r` of a planar ball along `n_dirs`
/// equally spaced directions, by bisection on the radial distance.
///
/// Requires continuous component metrics: along a ray the distance is then
/// nondecreasing in the ray parameter, so the crossing is bracketed by
/// doubling from `[0, 1]`. Bisection runs until the bracket stops shrinking
/// (at most 100 halvings); a direction whose best point misses the radius
/// by more than `tol` is an error.
pub fn ball_boundary_sample_2d(ball: &Ball, n_dirs: usize, tol: f64) -> Result<Vec<BoundaryPoint>> {
    if ball.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ball.dim(),
        });
    }
    if !ball.metric.is_continuous() {
        return Err(Error::UnsupportedGeometry(
            "boundary of a ball with a discrete component is degenerate".into(),
        ));
    }
    if !(ball.radius > 0.0) {
        return Err(Error::InvalidParameter("boundary tracing needs radius > 0".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let (cx, cy) = (ball.center[0], ball.center[1]);
    let r = ball.radius;
    let step = std::f64::consts::TAU / n_dirs as f64;

    (0..n_dirs)
        .map(|k| {
            let theta = k as f64 * step;
            // cos(π/2) is not exactly 0 in floating point; snap axis directions.
            let snap = |v: f64| if v.abs() < f64::EPSILON { 0.0 } else { v };
            let (sin, cos) = theta.sin_cos();
            let (sin, cos) = (snap(sin), snap(cos));
            let point_at = |t: f64| [cx + t * cos, cy + t * sin];
            let dist_at = |t: f64| ball.metric.distance(&point_at(t), &ball.center);

            let mut lo = 0.0;
            let mut hi = 1.0;
            let mut doublings = 0;
            while dist_at(hi) <= r {
                lo = hi;
                hi *= 2.0;
                doublings += 1;
                if doublings > RADIAL_MAX_DOUBLINGS || !hi.is_finite() {
                    return Err(Error::BoundaryNotResolved { theta });
                }
            }
            let mut best = (f64::INFINITY, hi);
            for _ in 0..RADIAL_MAX_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                let d = dist_at(mid);
                let gap = (d - r).abs();
                if gap < best.0 {
                    best = (gap, mid);
                }
                if gap == 0.0 || mid == lo || mid == hi {
                    break;
                }
                if d <= r {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if best.0 > tol {
                return Err(Error::BoundaryNotResolved { theta });
            }
            let [x, y] = point_at(best.1);
            Ok(BoundaryPoint { theta, x, y })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NestingDirection {
    /// `r < 1`: the ball for the smaller exponent sits inside the other.
    FineInsideCoarse,
    /// `r >= dim`: the ball for the larger exponent sits inside the other.
    CoarseInsideFine,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingReport {
    pub direction: NestingDirection,
    pub samples: usize,
    /// Sampled points lying in the ball that should be the inner one.
    pub antecedent_hits: usize,
    /// Points in the inner ball but outside the outer one.
    pub counterexamples: Vec<Vec<f64>>,
}

/// Samples points around the origin and checks the subset relation between
/// the closed `d_s` balls of radius `r` for two exponents `s_fine < s_coarse`.
///
/// Points are drawn as `xᵢ = ±(r·uᵢ)^{1/s}` with `uᵢ` uniform in `[0, 1]` and
/// `s` alternating between the two exponents; such a point lies in the
/// `d_s` ball exactly when `Σ uᵢ <= 1`, so both boundaries are well covered.
pub fn ball_nesting_check(
    r: f64,
    s_fine: f64,
    s_coarse: f64,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<NestingReport> {
    let fine = PowerExponent::new(s_fine)?.get();
    let coarse = PowerExponent::new(s_coarse)?.get();
    if !(fine < coarse) {
        return Err(Error::InvalidParameter(format!(
            "need s_fine < s_coarse, got {fine} and {coarse}"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dim must be >= 1".into()));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidParameter(format!("invalid radius {r}")));
    }
    let direction = if r < 1.0 {
        NestingDirection::FineInsideCoarse
    } else if r >= dim as f64 {
        NestingDirection::CoarseInsideFine
    } else {
        return Err(Error::NoInclusionRegime { radius: r, dim });
    };
    let (inner, outer) = match direction {
        NestingDirection::FineInsideCoarse => (fine, coarse),
        NestingDirection::CoarseInsideFine => (coarse, fine),
    };

    let mut rng = seeded_rng(seed);
    let mut report = NestingReport {
        direction,
        samples,
        antecedent_hits: 0,
        counterexamples: Vec::new(),
    };
    let zero = vec![0.0; dim];
    let mut point = vec![0.0; dim];
    for k in 0..samples {
        let s = if k % 2 == 0 { fine } else { coarse };
        for c in point.iter_mut() {
            let u: f64 = rng.gen();
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            *c = sign * (r * u).powf(s.recip());
        }
        if ds_unchecked(inner, &point, &zero) <= r {
            report.antecedent_hits += 1;
            if ds_unchecked(outer, &point, &zero) > r {
                report.counterexamples.push(point.clone());
            }
        }
    }
    Ok(report)
}

/// Membership in the closed support ball `{x : ‖x‖₀ <= r}` about the origin.
///
/// In the plane this is the origin alone for `r < 1`, the two axes for
/// `1 <= r < 2` and everything for `r >= 2`. In ℝⁿ it is `‖x‖₀ <= floor(r)`.
pub fn limit_ball_membership(r: f64, point: &[f64], tau: Tau) -> bool {
    support_size(point, tau) as f64 <= r
}

/// Closed ball of radius `r` about the origin for `σ₀(x₁, 0) + |x₂|`,
/// evaluated piecewise: `|x₂| <= r` on the line `x₁ = 0`, and
/// `|x₂| <= r - 1` off it.
pub fn alt_ball_contains(r: f64, point: [f64; 2], tau: Tau) -> bool {
    let [x1, x2] = point;
    if tau.equal(x1, 0.0) {
        x2.abs() <= r
    } else {
        x2.abs() <= r - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscreteBall {
    /// Only the center.
    Singleton,
    /// The whole space.
    WholeSpace,
}

/// Shape of the closed discrete-metric ball of radius `r`.
///
/// `r <= 0` still yields the center alone.
pub fn discrete_ball_cases(r: f64) -> DiscreteBall {
    if r >= 1.0 {
        DiscreteBall::WholeSpace
    } else {
        DiscreteBall::Singleton
    }
}

/// Two ball points whose chord point leaves the ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordWitness {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
    /// Distance of `t·a + (1-t)·b` to the center.
    pub distance: f64,
}

/// Searches for a chord of the ball that leaves it.
///
/// For closed balls, the midpoints between the boundary points on each pair
/// of coordinate axes are tried first; then `samples` random pairs of ball
/// points (rejection-sampled from the bounding box) with random `t`.
pub fn ball_convexity_check(ball: &Ball, samples: usize, seed: u64) -> Result<Option<ChordWitness>> {
    let dim = ball.dim();
    let extent = ball
        .metric
        .coordinate_extent(ball.radius, dim)
        .ok_or_else(|| Error::UnsupportedGeometry("ball is unbounded or degenerate along some axis".into()))?;
    let c = ball.center.as_slice();
    let chord = |a: &[f64], b: &[f64], t: f64| -> Option<ChordWitness> {
        let p: Vec<f64> = a.iter().zip(b).map(|(u, v)| t * u + (1.0 - t) * v).collect();
        (!ball.contains_unchecked(&p)).then(|| ChordWitness {
            a: a.to_vec(),
            b: b.to_vec(),
            t,
            distance: ball.metric.distance(&p, c),
        })
    };

    if ball.closed {
        for i in 0..dim {
            for j in i + 1..dim {
                let mut a = c.to_vec();
                let mut b = c.to_vec();
                a[i] += extent[i];
                b[j] += extent[j];
                if ball.contains_unchecked(&a) && ball.contains_unchecked(&b) {
                    if let Some(w) = chord(&a, &b, 0.5) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }

    let mut rng = seeded_rng(seed);
    let draw_inside = |rng: &mut rand_chacha::ChaCha8Rng| -> Option<Vec<f64>> {
        for _ in 0..10_000 {
            let p: Vec<f64> = c
                .iter()
                .zip(&extent)
                .map(|(ci, e)| if *e > 0.0 { ci + rng.gen_range(-e..=*e) } else { *ci })
                .collect();
            if ball.contains_unchecked(&p) {
                return Some(p);
            }
        }
        None
    };
    for _ in 0..samples {
        let (Some(a), Some(b)) = (draw_inside(&mut rng), draw_inside(&mut rng)) else {
            break;
        };
        let t: f64 = rng.gen();
        if let Some(w) = chord(&a, &b, t) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
