//! Cartesian-product p-metrics built from per-coordinate scalar metrics,
//! the `d_s` family and the support (counting) distance it converges to.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::{abs_pow, Distance, PowerExponent, ScalarMetric, Tau};
use crate::vector::{check_dim, Vector};

/// Exponent of a product metric or norm: a real `p >= 1` or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Finite(f64),
    Infinity,
}

impl Order {
    /// Validates `p >= 1`. `f64::INFINITY` maps to [`Order::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidOrder(p))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// Combines non-negative per-coordinate terms: `(Σ tᵢ^p)^{1/p}` or `max tᵢ`.
    pub(crate) fn combine<I>(self, terms: I) -> f64
    where
        I: Iterator<Item = f64> + Clone,
    {
        match self {
            Self::Infinity => terms.fold(0.0, f64::max),
            Self::Finite(1.0) => terms.sum(),
            Self::Finite(2.0) => terms.map(|t| t * t).sum::<f64>().sqrt(),
            Self::Finite(p) => {
                let scale = terms.clone().fold(0.0, f64::max);
                if scale == 0.0 || !scale.is_finite() {
                    return scale;
                }
                let sum: f64 = terms.map(|t| (t / scale).powf(p)).sum();
                scale * sum.powf(p.recip())
            }
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Infinity" => Ok(Self::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("invalid exponent `{other}`")))?;
                Self::new(p)
            }
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => serializer.serialize_f64(*p),
            Self::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// The p-metric on a product of real lines, one scalar metric per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductMetric {
    components: Vec<ScalarMetric>,
    order: Order,
}

impl ProductMetric {
    pub fn new(components: Vec<ScalarMetric>, order: Order) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "product metric needs at least one component".into(),
            ));
        }
        Ok(Self { components, order })
    }

    /// The same scalar metric on every one of `dim` coordinates.
    pub fn homogeneous(metric: ScalarMetric, dim: usize, order: Order) -> Result<Self> {
        Self::new(vec![metric; dim], order)
    }

    /// `d_s`: power-`s` components combined with `p = 1`.
    pub fn ds(s: f64, dim: usize) -> Result<Self> {
        Self::homogeneous(ScalarMetric::power(s)?, dim, Order::Finite(1.0))
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarMetric] {
        &self.components
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// All components continuous (no discrete metric among them).
    pub fn is_continuous(&self) -> bool {
        self.components.iter().all(ScalarMetric::is_continuous)
    }

    /// Unchecked evaluation; callers guarantee matching lengths.
    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        let terms = self
            .components
            .iter()
            .zip(x.iter().zip(y))
            .map(|(rho, (a, b))| rho.distance(*a, *b));
        self.order.combine(terms)
    }
}

impl Distance for ProductMetric {
    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.eval(x, y)
    }
}

/// Product p-metric distance between `x` and `y`.
pub fn product_distance(spec: &ProductMetric, x: &Vector, y: &Vector) -> Result<f64> {
    x.expect_dim(spec.dim())?;
    y.expect_dim(spec.dim())?;
    Ok(spec.eval(x, y))
}

/// `Σ |xᵢ - yᵢ|^s` for `0 < s <= 1`.
pub fn ds_distance(s: f64, x: &Vector, y: &Vector) -> Result<f64> {
    let s = PowerExponent::new(s)?.get();
    check_dim(x.dim(), y.dim())?;
    Ok(ds_unchecked(s, x, y))
}

#[inline]
pub(crate) fn ds_unchecked(s: f64, x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| abs_pow(a - b, s)).sum()
}

/// Number of coordinates where `x` and `y` differ by more than `tau`.
///
/// With `y = 0` this is the sparsity count `‖x‖₀`.
pub fn support_distance(x: &Vector, y: &Vector, tau: Tau) -> Result<usize> {
    check_dim(x.dim(), y.dim())?;
    Ok(support_unchecked(x, y, tau))
}

#[inline]
pub(crate) fn support_unchecked(x: &[f64], y: &[f64], tau: Tau) -> usize {
    x.iter().zip(y).filter(|(a, b)| !tau.equal(**a, **b)).count()
}

/// `‖x‖₀`: coordinates with `|xᵢ| > tau`.
pub fn support_size(x: &[f64], tau: Tau) -> usize {
    x.iter().filter(|v| v.abs() > tau.get()).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub s: f64,
    pub value: f64,
}

/// Trajectory of `d_s(x, y)` for shrinking `s` together with the limit `d_0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitScan {
    pub trajectory: Vec<ScanPoint>,
    pub support: usize,
}

impl LimitScan {
    /// Largest `|d_s - d_0|` over the trajectory.
    pub fn max_gap(&self) -> f64 {
        let d0 = self.support as f64;
        self.trajectory.iter().map(|p| (p.value - d0).abs()).fold(0.0, f64::max)
    }

    pub fn last(&self) -> Option<ScanPoint> {
        self.trajectory.last().copied()
    }
}

pub(crate) fn scan_unchecked(x: &[f64], y: &[f64], s_list: &[f64], tau: Tau) -> Result<LimitScan> {
    let trajectory = s_list
        .iter()
        .map(|&s| {
            let s = PowerExponent::new(s)?.get();
            Ok(ScanPoint {
                s,
                value: ds_unchecked(s, x, y),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitScan {
        trajectory,
        support: support_unchecked(x, y, tau),
    })
}

/// Evaluates `d_s(x, y)` along a strictly decreasing list of exponents in
/// `(0, 1]` and reports the support distance alongside.
pub fn limit_scan(x: &Vector, y: &Vector, s_list: &[f64], tau: Tau) -> Result<LimitScan> {
    check_dim(x.dim(), y.dim())?;
    if s_list.is_empty() {
        return Err(Error::InvalidParameter("exponent list is empty".into()));
    }
    if s_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "exponent list must be strictly decreasing".into(),
        ));
    }
    scan_unchecked(x, y, s_list, tau)
}

/// Checks that the product metric restricted to coordinate `index` (0-based)
/// reproduces that coordinate's own metric.
///
/// For each pair `(t, t')`, the two points equal `anchor` except at `index`,
/// where they take `t` and `t'`. Returns the largest absolute discrepancy.
pub fn embedding_compatibility_check(
    spec: &ProductMetric,
    anchor: &Vector,
    index: usize,
    pairs: &[(f64, f64)],
) -> Result<f64> {
    anchor.expect_dim(spec.dim())?;
    if index >= spec.dim() {
        return Err(Error::IndexOutOfRange { index, dim: spec.dim() });
    }
    let rho = spec.components()[index];
    let mut u = anchor.to_vec();
    let mut v = anchor.to_vec();
    let mut worst: f64 = 0.0;
    for &(t, t2) in pairs {
        u[index] = t;
        v[index] = t2;
        worst = worst.max((spec.eval(&u, &v) - rho.distance(t, t2)).abs());
    }
    Ok(worst)
}
