//! Optimal metric selection from a reference solution pair.
//!
//! Given the cone-side optimum `X⋆` (the terminal LMI matrix, never the raw
//! decision vector) and the unscaled dual optimum `Λ⋆`, the best metric
//! parameters for a fixed split `k` minimize
//!
//! ```text
//! f(γ1, γ2) = (γ1/γ2)‖X1‖² + (γ2/γ1)‖Λ1‖² + γ1γ2‖X2‖² + ‖Λ2‖²/(γ1γ2)
//!           + 2γ1‖X0‖² + 2‖Λ0‖²/γ1
//! ```
//!
//! over `γ1, γ2 > 0`, where the subscripts denote block norms under the
//! split. The objective is strictly convex on the positive orthant, so the
//! minimizer is unique: `γ2⋆` is the unique positive real root of a quartic
//! in the block norms and `γ1⋆` follows in closed form. A finite search over
//! the `n − 1` splits then yields the full-structure optimum.
//!
//! When the dual is a scalar multiple of the cone point the search collapses:
//! `γ2⋆ = 1` for every split and `γ1⋆ = ‖Λ⋆‖/‖X⋆‖`, the optimal scalar step.
//! [`worst_case_gap`] measures the distance from that regime.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quartic::{unique_positive_root, QuarticCoeffs};
use crate::symmat::{BlockNorms, BlockPartition, SymMat};

/// Reference optimum: the cone-side point and the unscaled dual.
#[derive(Debug, Clone)]
pub struct ReferencePair {
    x_star: SymMat,
    lambda_star: SymMat,
}

impl ReferencePair {
    pub fn new(x_star: SymMat, lambda_star: SymMat) -> Result<Self> {
        if x_star.dim() != lambda_star.dim() {
            return Err(Error::DimensionMismatch {
                expected: x_star.dim(),
                got: lambda_star.dim(),
            });
        }
        if x_star.norm_sq() == 0.0 && lambda_star.norm_sq() == 0.0 {
            return Err(Error::DegenerateData("both reference matrices are zero".into()));
        }
        Ok(ReferencePair { x_star, lambda_star })
    }

    pub fn dim(&self) -> usize {
        self.x_star.dim()
    }

    pub fn x_star(&self) -> &SymMat {
        &self.x_star
    }

    pub fn lambda_star(&self) -> &SymMat {
        &self.lambda_star
    }
}

/// Per-split tuning outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionTune {
    pub k: usize,
    pub gamma1: f64,
    pub gamma2: f64,
    pub f_k: f64,
}

/// Full finite-search result over all splits.
#[derive(Debug, Clone)]
pub struct TuneResult {
    pub k_star: usize,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Minimal objective `f_K = 2αβ` over the splits.
    pub objective: f64,
    pub per_k: Vec<PartitionTune>,
}

impl TuneResult {
    pub fn to_metric(&self, n: usize) -> Result<crate::metric::Metric> {
        crate::metric::Metric::new(n, self.k_star, self.gamma1, self.gamma2)
    }

    /// CSV with one row per split and a marker on the chosen one.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,gamma1,gamma2,f_k,chosen\n");
        for t in &self.per_k {
            let chosen = if t.k == self.k_star { 1 } else { 0 };
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{}\n",
                t.k, t.gamma1, t.gamma2, t.f_k, chosen
            ));
        }
        out
    }
}

/// The tuning objective evaluated at arbitrary positive parameters.
pub fn p1_objective(x: &BlockNorms, l: &BlockNorms, gamma1: f64, gamma2: f64) -> f64 {
    gamma1 / gamma2 * x.v1
        + gamma2 / gamma1 * l.v1
        + gamma1 * gamma2 * x.v2
        + l.v2 / (gamma1 * gamma2)
        + 2.0 * gamma1 * x.v0
        + 2.0 * l.v0 / gamma1
}

/// Floors every squared block norm at `1e-12 · (‖X⋆‖² + ‖Λ⋆‖²)` so the
/// quartic stays well-posed; the uniqueness argument needs strictly positive
/// norms and the floor perturbs the optimum at tolerance level only.
fn regularized_norms(pair: &ReferencePair, p: BlockPartition) -> Result<(BlockNorms, BlockNorms)> {
    let tau = 1e-12 * (pair.x_star.norm_sq() + pair.lambda_star.norm_sq());
    if tau <= 0.0 {
        return Err(Error::DegenerateData("reference pair has zero norm".into()));
    }
    let floor = |b: BlockNorms| BlockNorms {
        v1: b.v1.max(tau),
        v0: b.v0.max(tau),
        v2: b.v2.max(tau),
    };
    Ok((floor(pair.x_star.block_norms(p)?), floor(pair.lambda_star.block_norms(p)?)))
}

/// Optimal `(γ1, γ2)` and objective value for one split.
pub fn tune_for_partition(pair: &ReferencePair, k: usize) -> Result<PartitionTune> {
    let p = BlockPartition::new(pair.dim(), k)?;
    let (bx, bl) = regularized_norms(pair, p)?;
    let coeffs = QuarticCoeffs::from_block_norms(bx.v1, bx.v0, bx.v2, bl.v1, bl.v0, bl.v2);
    let gamma2 = unique_positive_root(&coeffs).map_err(|err| match err {
        Error::DegenerateData(msg) => Error::DegenerateData(format!(
            "split {k}: degenerate block norms after regularization ({msg}); \
             x blocks ({:.3e}, {:.3e}, {:.3e}), dual blocks ({:.3e}, {:.3e}, {:.3e})",
            bx.v1, bx.v0, bx.v2, bl.v1, bl.v0, bl.v2
        )),
        other => other,
    })?;

    let alpha = (bx.v1 / gamma2 + gamma2 * bx.v2 + 2.0 * bx.v0).sqrt();
    let beta = (gamma2 * bl.v1 + bl.v2 / gamma2 + 2.0 * bl.v0).sqrt();
    let gamma1 = beta / alpha;
    let f_k = 2.0 * alpha * beta;

    // the minimizer must satisfy both eliminations of γ1 simultaneously
    let r_first = (bl.v2 + gamma2 * bl.v0) / (gamma2 * gamma2 * bx.v2 + gamma2 * bx.v0);
    let r_second = (gamma2 * gamma2 * bl.v1 + gamma2 * bl.v0) / (bx.v1 + gamma2 * bx.v0);
    let g1_sq = gamma1 * gamma1;
    for r in [r_first, r_second] {
        if (r - g1_sq).abs() > 1e-8 * (r.abs() + g1_sq) {
            return Err(Error::Numeric(format!(
                "split {k}: stationarity check failed (gamma1^2 = {g1_sq:.12e} vs {r:.12e})"
            )));
        }
    }
    Ok(PartitionTune { k, gamma1, gamma2, f_k })
}

/// Finite search over every split; deterministic tie-break to the smallest
/// `k`. Split evaluations are independent and run in parallel.
pub fn tune(pair: &ReferencePair) -> Result<TuneResult> {
    let n = pair.dim();
    if n < 2 {
        return Err(Error::DegenerateData("cone dimension must be at least 2".into()));
    }
    let per_k: Vec<PartitionTune> = (1..n)
        .into_par_iter()
        .map(|k| tune_for_partition(pair, k))
        .filter_map(|r| r.ok())
        .collect();
    if per_k.is_empty() {
        return Err(Error::DegenerateData("all partitions degenerate".into()));
    }
    // per_k is k-sorted, so strict < ties to the smallest split
    let mut best = per_k[0];
    for t in &per_k[1..] {
        if t.f_k < best.f_k {
            best = *t;
        }
    }
    Ok(TuneResult {
        k_star: best.k,
        gamma1: best.gamma1,
        gamma2: best.gamma2,
        objective: best.f_k,
        per_k,
    })
}

/// Relative mismatch between the two block ratios whose equality
/// characterizes the worst case; `0` means the tuned metric collapses to the
/// optimal scalar step.
pub fn worst_case_gap(pair: &ReferencePair, k: usize) -> Result<f64> {
    let p = BlockPartition::new(pair.dim(), k)?;
    let bx = pair.x_star.block_norms(p)?;
    let bl = pair.lambda_star.block_norms(p)?;
    let den_left = bx.v1 + bx.v0;
    let den_right = bx.v2 + bx.v0;
    if den_left <= 0.0 || den_right <= 0.0 {
        return Err(Error::DegenerateData(format!(
            "split {k}: zero denominator in worst-case ratios"
        )));
    }
    let r_left = (bl.v1 + bl.v0) / den_left;
    let r_right = (bl.v2 + bl.v0) / den_right;
    let m = r_left.max(r_right);
    if m <= 0.0 {
        return Err(Error::DegenerateData("dual reference is zero".into()));
    }
    Ok((r_left - r_right).abs() / m)
}

/// The optimal scalar step `‖Λ⋆‖ / ‖X⋆‖` (cone-side norms).
pub fn optimal_scalar(pair: &ReferencePair) -> Result<f64> {
    let nx = pair.x_star.norm();
    if nx <= 0.0 {
        return Err(Error::DegenerateData("cone-side reference is zero".into()));
    }
    Ok(pair.lambda_star.norm() / nx)
}
