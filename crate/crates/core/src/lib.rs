//! Distance measures for sparsity.
//!
//! Scalar metrics on ℝ (`|x-y|`, `|x-y|^s`, discrete) are combined into
//! Cartesian-product p-metrics on ℝⁿ. The `p = 1` product of `|x-y|^s`
//! components is `d_s(x, y) = Σ |xᵢ - yᵢ|^s`, which tends to the support
//! count `#{i : xᵢ ≠ yᵢ}` as `s → 0⁺`; with `y = 0` that count is the
//! sparsity measure `‖x‖₀`.
//!
//! Around these sit ball geometry ([`ball`]), convexity and homogeneity
//! falsification plus the Minkowski functional ([`gauge`]), Hausdorff
//! distance ([`hausdorff`]), and an exact ℓ0 solver for small
//! underdetermined systems ([`sparse`]).

// NaN-rejecting parameter checks read as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod error;
pub mod gauge;
pub mod hausdorff;
pub mod metric;
pub mod product;
pub mod sparse;
pub mod vector;

pub use error::{Error, Result};
pub use metric::{Distance, ScalarMetric, Tau, DEFAULT_TAU};
pub use product::{Order, ProductMetric};
pub use vector::Vector;
