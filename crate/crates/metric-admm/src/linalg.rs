//! Small dense helpers for the normal-equation solves.
//!
//! The Gram systems are `m x m` with `m` at most a couple hundred, so a plain
//! Cholesky factorization is enough; it is computed once per solve because
//! the metric is constant over a run.

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix
/// given row-major.
pub(crate) struct Chol {
    m: usize,
    l: Vec<f64>,
}

impl Chol {
    pub(crate) fn factor(m: usize, a: &[f64]) -> Result<Chol> {
        debug_assert_eq!(a.len(), m * m);
        let mut l = vec![0.0; m * m];
        let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1e-300);
        for i in 0..m {
            for j in 0..=i {
                let mut s = a[i * m + j];
                for k in 0..j {
                    s -= l[i * m + k] * l[j * m + k];
                }
                if i == j {
                    if s <= 1e-14 * scale {
                        return Err(Error::IllPosed(format!(
                            "Gram matrix is not positive definite at pivot {i} \
                             (duplicated or contradicted constraints)"
                        )));
                    }
                    l[i * m + i] = s.sqrt();
                } else {
                    l[i * m + j] = s / l[j * m + j];
                }
            }
        }
        Ok(Chol { m, l })
    }

    pub(crate) fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.m;
        debug_assert_eq!(rhs.len(), m);
        let mut y = rhs.to_vec();
        for i in 0..m {
            for k in 0..i {
                y[i] -= self.l[i * m + k] * y[k];
            }
            y[i] /= self.l[i * m + i];
        }
        for i in (0..m).rev() {
            for k in i + 1..m {
                y[i] -= self.l[k * m + i] * y[k];
            }
            y[i] /= self.l[i * m + i];
        }
        y
    }
}

/// `A^T A` for a column-major `rows x cols` matrix.
pub(crate) fn gram(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), rows * cols);
    let mut g = vec![0.0; cols * cols];
    for i in 0..cols {
        let ci = &a[i * rows..(i + 1) * rows];
        for j in 0..=i {
            let cj = &a[j * rows..(j + 1) * rows];
            let s: f64 = ci.iter().zip(cj).map(|(x, y)| x * y).sum();
            g[i * cols + j] = s;
            g[j * cols + i] = s;
        }
    }
    g
}

/// `A^T v` for a column-major `rows x cols` matrix.
pub(crate) fn at_mul(a: &[f64], rows: usize, cols: usize, v: &[f64]) -> Vec<f64> {
    debug_assert_eq!(v.len(), rows);
    let mut out = vec![0.0; cols];
    for i in 0..cols {
        out[i] = a[i * rows..(i + 1) * rows].iter().zip(v).map(|(x, y)| x * y).sum();
    }
    out
}

/// `out += A x` for a column-major `rows x cols` matrix.
pub(crate) fn add_a_mul(a: &[f64], rows: usize, cols: usize, x: &[f64], out: &mut [f64]) {
    debug_assert_eq!(x.len(), cols);
    debug_assert_eq!(out.len(), rows);
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(&a[i * rows..(i + 1) * rows]) {
            *o += xi * v;
        }
    }
}

/// Exact minimizer of `½ xᵀDx − rhsᵀx` over `x ≥ 0` for a symmetric positive
/// definite `D` (Lawson-Hanson active-set iteration).
///
/// The element-wise clip of `D⁻¹ rhs` coincides with this solution only when
/// `D` is diagonal or the bound is inactive; the solver loops need the exact
/// point so that every parameterization shares one fixed point.
pub(crate) fn nonneg_solve(m: usize, d: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    debug_assert_eq!(d.len(), m * m);
    debug_assert_eq!(rhs.len(), m);
    let scale = rhs.iter().fold(1e-300f64, |a, v| a.max(v.abs()))
        * d.iter().fold(1e-300f64, |a, v| a.max(v.abs()));
    let tol = 1e-13 * scale.max(1e-300);

    let mut x = vec![0.0; m];
    let mut free = vec![false; m];
    let solve_reduced = |free: &[bool]| -> Result<Vec<f64>> {
        let idx: Vec<usize> = (0..m).filter(|&i| free[i]).collect();
        let k = idx.len();
        let mut dr = vec![0.0; k * k];
        let mut rr = vec![0.0; k];
        for (a, &i) in idx.iter().enumerate() {
            rr[a] = rhs[i];
            for (b, &j) in idx.iter().enumerate() {
                dr[a * k + b] = d[i * m + j];
            }
        }
        let sol = Chol::factor(k, &dr)?.solve(&rr);
        let mut full = vec![0.0; m];
        for (a, &i) in idx.iter().enumerate() {
            full[i] = sol[a];
        }
        Ok(full)
    };

    // gradient at x = 0 decides the first insertion; finite termination per
    // the classic argument (the objective strictly decreases per outer step)
    for _ in 0..4 * m + 8 {
        let mut grad = vec![0.0; m];
        for i in 0..m {
            let mut g = -rhs[i];
            for j in 0..m {
                g += d[i * m + j] * x[j];
            }
            grad[i] = g;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            if !free[i] && grad[i] < -tol {
                match best {
                    Some((_, g)) if grad[i] >= g => {}
                    _ => best = Some((i, grad[i])),
                }
            }
        }
        let Some((enter, _)) = best else {
            return Ok(x); // KKT satisfied
        };
        free[enter] = true;

        // inner loop: restore feasibility of the reduced solution; each pass
        // moves at least one coordinate back to the bound, so it terminates
        loop {
            let cand = solve_reduced(&free)?;
            if (0..m).all(|i| !free[i] || cand[i] > 0.0) {
                x = cand;
                break;
            }
            // step from x toward cand until the first free coordinate hits 0
            let mut alpha = 1.0f64;
            for i in 0..m {
                if free[i] && cand[i] <= 0.0 && x[i] - cand[i] > 0.0 {
                    alpha = alpha.min(x[i] / (x[i] - cand[i]));
                }
            }
            let pin = 1e-12 * x.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for i in 0..m {
                if free[i] {
                    x[i] += alpha * (cand[i] - x[i]);
                    if cand[i] <= 0.0 && x[i] <= pin {
                        x[i] = 0.0;
                        free[i] = false;
                    }
                }
            }
        }
    }
    Err(Error::Numeric("nonnegative least-squares did not terminate".into()))
}

#[cfg_attr(not(test), allow(dead_code))] // test-side oracle helper
pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn sub_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
