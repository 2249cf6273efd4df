//! Hausdorff distance between finite point sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::Distance;
use crate::product::ProductMetric;
use crate::vector::{check_dim, Vector};

/// A nonempty finite set of points sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<Vector>,
}

impl PointSet {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPointSet)?;
        let dim = first.dim();
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        Ok(Self { points })
    }

    /// Builds the set from raw rows, validating each one.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(Vector::new).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }
}

fn directed<D: Distance + ?Sized>(from: &PointSet, to: &PointSet, metric: &D) -> f64 {
    from.points
        .iter()
        .map(|k| {
            to.points
                .iter()
                .map(|a| metric.distance(k, a))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn check_operands(k: &PointSet, a: &PointSet, metric: &ProductMetric) -> Result<()> {
    check_dim(metric.dim(), k.dim())?;
    check_dim(metric.dim(), a.dim())
}

/// `max_{κ∈K} min_{α∈A} d(κ, α)`, by exhaustive pairwise evaluation.
pub fn directed_hausdorff(k: &PointSet, a: &PointSet, metric: &ProductMetric) -> Result<f64> {
    check_operands(k, a, metric)?;
    Ok(directed(k, a, metric))
}

/// The larger of the two directed distances.
pub fn hausdorff(k: &PointSet, a: &PointSet, metric: &ProductMetric) -> Result<f64> {
    check_operands(k, a, metric)?;
    Ok(directed(k, a, metric).max(directed(a, k, metric)))
}
