//! Base metrics on the real line and a randomized search for metric-axiom
//! violations that works against any distance function.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default zero tolerance: two reals are treated as equal iff `|x - y| <= 1e-9`.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Zero tolerance used by the discrete metric and by support counting.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Tau(f64);

impl Tau {
    pub fn new(tau: f64) -> Result<Self> {
        if tau.is_finite() && tau >= 0.0 {
            Ok(Self(tau))
        } else {
            Err(Error::InvalidTolerance(tau))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `true` when `x` and `y` count as the same real under this tolerance.
    #[inline]
    pub fn equal(self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.0
    }
}

impl Default for Tau {
    fn default() -> Self {
        Self(DEFAULT_TAU)
    }
}

/// Exponent `s` of the power metric `|x - y|^s`, restricted to `0 < s <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PowerExponent(f64);

impl PowerExponent {
    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s <= 1.0 {
            Ok(Self(s))
        } else {
            Err(Error::InvalidPower(s))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `|x - y|^s`, exact zero at `x == y`.
#[inline]
pub(crate) fn abs_pow(diff: f64, s: f64) -> f64 {
    let a = diff.abs();
    if a == 0.0 {
        0.0
    } else if s == 1.0 {
        a
    } else {
        a.powf(s)
    }
}

/// A metric on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScalarMetric {
    /// `|x - y|`
    Absolute,
    /// `|x - y|^s` with `0 < s <= 1`
    Power { s: PowerExponent },
    /// 1 for distinct reals, 0 for equal ones (equality up to `tau`)
    Discrete { tau: Tau },
}

impl ScalarMetric {
    pub fn power(s: f64) -> Result<Self> {
        Ok(Self::Power {
            s: PowerExponent::new(s)?,
        })
    }

    pub fn discrete() -> Self {
        Self::Discrete { tau: Tau::default() }
    }

    pub fn discrete_with_tau(tau: Tau) -> Self {
        Self::Discrete { tau }
    }

    /// Distance between two reals.
    #[inline]
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        match *self {
            Self::Absolute => (x - y).abs(),
            Self::Power { s } => abs_pow(x - y, s.get()),
            Self::Discrete { tau } => {
                if tau.equal(x, y) {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Whether the metric is continuous in its arguments.
    pub fn is_continuous(&self) -> bool {
        !matches!(self, Self::Discrete { .. })
    }
}

/// Free-function form of [`ScalarMetric::distance`].
pub fn scalar_distance(kind: &ScalarMetric, x: f64, y: f64) -> f64 {
    kind.distance(x, y)
}

impl fmt::Display for ScalarMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Absolute => f.write_str("abs"),
            Self::Power { s } => write!(f, "pow:{}", s.get()),
            Self::Discrete { .. } => f.write_str("disc"),
        }
    }
}

/// Parses `abs`, `pow:<s>` or `disc`. The discrete metric gets the default tolerance.
impl FromStr for ScalarMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "abs" => Ok(Self::Absolute),
            "disc" => Ok(Self::discrete()),
            _ => {
                let exponent = s
                    .strip_prefix("pow:")
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown metric descriptor `{s}`")))?;
                let value: f64 = exponent
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("invalid power exponent `{exponent}`")))?;
                Self::power(value)
            }
        }
    }
}

/// Parses a comma-separated list of metric descriptors, e.g. `disc,abs`.
pub fn parse_metric_list(list: &str) -> Result<Vec<ScalarMetric>> {
    list.split(',').map(str::parse).collect()
}

/// A distance function on ℝⁿ given as coordinate slices.
pub trait Distance {
    fn distance(&self, x: &[f64], y: &[f64]) -> f64;
}

impl<F> Distance for F
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self(x, y)
    }
}

impl Distance for ScalarMetric {
    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), 1);
        ScalarMetric::distance(self, x[0], y[0])
    }
}

/// Axis-aligned box `[lo, hi]^dim` for uniform sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleBox {
    dim: usize,
    lo: f64,
    hi: f64,
}

impl SampleBox {
    pub fn new(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("sampling box needs dim >= 1".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidParameter(format!(
                "sampling box bounds must be finite with lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { dim, lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim).map(|_| rng.gen_range(self.lo..=self.hi)).collect()
    }
}

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Nonnegativity,
    Identity,
    Symmetry,
    Triangle,
    /// `d` returned NaN or an infinity.
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Points involved: `[x]` for `d(x,x)`, `[x, y]` for pairs, `[x, y, z]`
    /// for the triangle `d(x,y) <= d(x,z) + d(z,y)`.
    pub witness: Vec<Vec<f64>>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub trials_run: usize,
}

impl AxiomReport {
    /// No violation found. This is failure to falsify, not a proof.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self, axiom: Axiom) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn count(&self, axiom: Axiom) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}

/// Checks one triple and appends any violations.
fn check_triple<D: Distance + ?Sized>(d: &D, x: &[f64], y: &[f64], z: &[f64], tol: f64, out: &mut Vec<AxiomViolation>) {
    let dxx = d.distance(x, x);
    let dxy = d.distance(x, y);
    let dyx = d.distance(y, x);
    let dxz = d.distance(x, z);
    let dzy = d.distance(z, y);

    if [dxx, dxy, dyx, dxz, dzy].iter().any(|v| !v.is_finite()) {
        out.push(AxiomViolation {
            axiom: Axiom::NonFinite,
            witness: vec![x.to_vec(), y.to_vec(), z.to_vec()],
            magnitude: f64::INFINITY,
        });
        return;
    }
    if dxy < -tol {
        out.push(AxiomViolation {
            axiom: Axiom::Nonnegativity,
            witness: vec![x.to_vec(), y.to_vec()],
            magnitude: -dxy,
        });
    }
    if dxx > tol {
        out.push(AxiomViolation {
            axiom: Axiom::Identity,
            witness: vec![x.to_vec()],
            magnitude: dxx,
        });
    }
    if dxy == 0.0 && x != y {
        let separation = x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if separation > tol {
            out.push(AxiomViolation {
                axiom: Axiom::Identity,
                witness: vec![x.to_vec(), y.to_vec()],
                magnitude: separation,
            });
        }
    }
    let asym = (dxy - dyx).abs();
    if asym > tol {
        out.push(AxiomViolation {
            axiom: Axiom::Symmetry,
            witness: vec![x.to_vec(), y.to_vec()],
            magnitude: asym,
        });
    }
    let excess = dxy - (dxz + dzy);
    if excess > tol {
        out.push(AxiomViolation {
            axiom: Axiom::Triangle,
            witness: vec![x.to_vec(), y.to_vec(), z.to_vec()],
            magnitude: excess,
        });
    }
}

/// Randomized falsification of the metric axioms.
///
/// Draws `trials` triples uniformly from `domain` using `seed`, and records
/// every violation larger than `tol`. An empty report only means that no
/// counterexample was found.
pub fn check_metric_axioms<D: Distance + ?Sized>(
    d: &D,
    domain: &SampleBox,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut report = AxiomReport::default();
    for _ in 0..trials {
        let x = domain.sample(&mut rng);
        let y = domain.sample(&mut rng);
        let z = domain.sample(&mut rng);
        check_triple(d, &x, &y, &z, tol, &mut report.violations);
        report.trials_run += 1;
    }
    Ok(report)
}

/// Exhaustive variant over every ordered triple of `points`.
pub fn check_metric_axioms_exhaustive<D: Distance + ?Sized>(
    d: &D,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<AxiomReport> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut report = AxiomReport::default();
    for x in points {
        for y in points {
            for z in points {
                check_triple(d, x, y, z, tol, &mut report.violations);
                report.trials_run += 1;
            }
        }
    }
    Ok(report)
}
