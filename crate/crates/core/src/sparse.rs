//! Exact ℓ0 minimization for small underdetermined systems `Ax = b` by
//! support enumeration, sampling of the affine solution set, and comparison
//! of `d_s` sparsity surrogates against the exact optimum.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{seeded_rng, PowerExponent, Tau};
use crate::product::{ds_unchecked, scan_unchecked, LimitScan};
use crate::vector::{check_dim, Vector};

/// Largest column count accepted by [`l0_min_bruteforce`].
pub const MAX_ENUMERATION_COLUMNS: usize = 24;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
/// Residual bound for points returned by [`solution_space_sample`].
pub const SAMPLE_RESIDUAL_BOUND: f64 = 1e-10;

/// The linear system `Ax = b` with `A` of size `m × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl LinearSystem {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::InvalidParameter("matrix must be at least 1×1".into()));
        }
        check_dim(a.nrows(), b.len())?;
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("system entries must be finite".into()));
        }
        Ok(Self { a, b })
    }

    /// Builds the system from row-major matrix rows and a right-hand side.
    pub fn from_rows(rows: &[Vec<f64>], b: &[f64]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        for row in rows {
            check_dim(n, row.len())?;
        }
        let a = DMatrix::from_row_iterator(m, n, rows.iter().flatten().copied());
        Self::new(a, DVector::from_column_slice(b))
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.b
    }

    /// `‖Ax - b‖₂`
    pub fn residual(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.cols());
        (&self.a * DVector::from_column_slice(x) - &self.b).norm()
    }
}

/// Minimum-norm least-squares solution of `M y ≈ rhs` via SVD.
fn min_norm_lstsq(m: DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    let (rows, cols) = m.shape();
    let svd = m.svd(true, true);
    let sigma_max = svd.singular_values.max();
    let eps = sigma_max * rows.max(cols) as f64 * f64::EPSILON;
    svd.solve(rhs, eps).expect("both singular vector sets were computed")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseSolution {
    pub x: Vector,
    /// `{i : |xᵢ| > τ}`, 0-based.
    pub support: Vec<usize>,
    /// `‖Ax - b‖₂`
    pub residual: f64,
}

impl SparseSolution {
    fn from_x(sys: &LinearSystem, x: Vec<f64>, tau: Tau) -> Result<Self> {
        let residual = sys.residual(&x);
        let support = x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > tau.get())
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            x: Vector::new(x)?,
            support,
            residual,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L0Options {
    pub residual_tol: f64,
    /// Largest support size tried; `None` means all `n` columns.
    pub max_support: Option<usize>,
    pub tau: Tau,
}

impl Default for L0Options {
    fn default() -> Self {
        Self {
            residual_tol: DEFAULT_RESIDUAL_TOL,
            max_support: None,
            tau: Tau::default(),
        }
    }
}

/// Sparsest solution of `Ax = b` by exhaustive support enumeration.
///
/// Supports are visited by increasing size and lexicographically within a
/// size; each one is solved in the least-squares sense on its columns. The
/// first support whose residual is within `residual_tol` wins, so the result
/// has minimal cardinality and, among those, the lexicographically smallest
/// support.
pub fn l0_min_bruteforce(sys: &LinearSystem, opts: &L0Options) -> Result<SparseSolution> {
    let n = sys.cols();
    if n > MAX_ENUMERATION_COLUMNS {
        return Err(Error::EnumerationTooLarge {
            n,
            limit: MAX_ENUMERATION_COLUMNS,
        });
    }
    if !(opts.residual_tol > 0.0) {
        return Err(Error::InvalidTolerance(opts.residual_tol));
    }
    let max_support = opts.max_support.unwrap_or(n).min(n);

    let zero_residual = sys.b.norm();
    if zero_residual <= opts.residual_tol {
        return SparseSolution::from_x(sys, vec![0.0; n], opts.tau);
    }
    let mut best_residual = zero_residual;
    for k in 1..=max_support {
        for support in (0..n).combinations(k) {
            let sub = sys.a.select_columns(support.iter());
            let coeffs = min_norm_lstsq(sub, &sys.b);
            let mut x = vec![0.0; n];
            for (&i, c) in support.iter().zip(coeffs.iter()) {
                x[i] = *c;
            }
            let residual = sys.residual(&x);
            if residual <= opts.residual_tol {
                return SparseSolution::from_x(sys, x, opts.tau);
            }
            best_residual = best_residual.min(residual);
        }
    }
    Err(Error::Infeasible {
        max_support,
        best_residual,
    })
}

/// Minimum-norm particular solution and an orthonormal null-space basis
/// (as columns).
fn particular_and_null_space(sys: &LinearSystem) -> (DVector<f64>, DMatrix<f64>) {
    let (m, n) = sys.a.shape();
    let particular = min_norm_lstsq(sys.a.clone(), &sys.b);

    // Pad to at least n rows so V is square and spans all of ℝⁿ.
    let mut padded = DMatrix::zeros(m.max(n), n);
    padded.rows_mut(0, m).copy_from(&sys.a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma_max = svd.singular_values.max();
    let eps = sigma_max * m.max(n) as f64 * f64::EPSILON;
    let null_rows: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= eps).collect();
    let basis = v_t.select_rows(null_rows.iter()).transpose();
    (particular, basis)
}

/// `count` exact solutions of `Ax = b`: the minimum-norm solution plus
/// standard-normal combinations of an orthonormal null-space basis.
pub fn solution_space_sample(sys: &LinearSystem, count: usize, seed: u64) -> Result<Vec<Vector>> {
    let (particular, basis) = particular_and_null_space(sys);
    let residual = sys.residual(particular.as_slice());
    if residual > SAMPLE_RESIDUAL_BOUND {
        return Err(Error::InconsistentSystem { residual });
    }
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| {
            let coeffs = DVector::from_fn(basis.ncols(), |_, _| StandardNormal.sample(&mut rng));
            let x = &particular + &basis * coeffs;
            let residual = sys.residual(x.as_slice());
            if residual > SAMPLE_RESIDUAL_BOUND {
                return Err(Error::InconsistentSystem { residual });
            }
            Vector::new(x.as_slice().to_vec())
        })
        .collect()
}

/// `d_s(x, 0)` over `s_list` (any order, each in `(0, 1]`) together with `‖x‖₀`.
pub fn sparsity_profile(x: &Vector, s_list: &[f64], tau: Tau) -> Result<LimitScan> {
    let zero = vec![0.0; x.dim()];
    scan_unchecked(x, &zero, s_list, tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateRow {
    pub ds: f64,
    pub l0: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurrogateReport {
    pub s: f64,
    /// The `d_s`-minimal candidate has the same support as the ℓ0 optimum.
    pub agreement: bool,
    pub surrogate_minimizer: Vector,
    pub surrogate_support: Vec<usize>,
    pub l0_minimizer: SparseSolution,
    /// One row per candidate; row 0 is the ℓ0 optimum, then the samples.
    pub table: Vec<CandidateRow>,
}

/// Ranks the ℓ0 optimum and `samples` random exact solutions by `d_s(x, 0)`
/// and reports whether the `d_s` minimizer shares the optimum's support.
pub fn surrogate_ranking_experiment(
    sys: &LinearSystem,
    s: f64,
    samples: usize,
    seed: u64,
    opts: &L0Options,
) -> Result<SurrogateReport> {
    let s = PowerExponent::new(s)?.get();
    let optimum = l0_min_bruteforce(sys, opts)?;
    let mut candidates = vec![optimum.x.clone()];
    if samples > 0 {
        candidates.extend(solution_space_sample(sys, samples, seed)?);
    }
    let support_of = |x: &[f64]| -> Vec<usize> {
        x.iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > opts.tau.get())
            .map(|(i, _)| i)
            .collect()
    };
    let zero = vec![0.0; sys.cols()];
    let table: Vec<CandidateRow> = candidates
        .iter()
        .map(|x| CandidateRow {
            ds: ds_unchecked(s, x, &zero),
            l0: support_of(x).len(),
        })
        .collect();
    let best = table
        .iter()
        .enumerate()
        .fold(0, |best, (i, row)| if row.ds < table[best].ds { i } else { best });
    let surrogate_minimizer = candidates.swap_remove(best);
    let surrogate_support = support_of(&surrogate_minimizer);
    Ok(SurrogateReport {
        s,
        agreement: surrogate_support == optimum.support,
        surrogate_minimizer,
        surrogate_support,
        l0_minimizer: optimum,
        table,
    })
}
