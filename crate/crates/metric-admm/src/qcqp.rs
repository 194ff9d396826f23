//! Convexified QCQP solver on the lifted cone.
//!
//! The quadratic program `min xᵀA0x + 2b0ᵀx  s.t. xᵀAᵢx + 2bᵢᵀx + cᵢ ≤ 0` is
//! lifted to dimension `n + 1` and convexified; the solved form is
//!
//! ```text
//! minimize   −⟨x, c⟩ − x22
//! subject to [ A0 + Σ xᵢAᵢ   b0 + Bx ]
//!            [ (b0 + Bx)ᵀ    −x22    ]  ⪰ 0,     x ≥ 0,
//! ```
//!
//! with `B = [b1 … bm]`. The ADMM x-update stays closed-form: with factor
//! blocks `(S1, s0, s22)` of the lifted metric, the stationarity system reads
//! `D x = t1 + t2 + c` with
//!
//! ```text
//! D  = Ãᵀ diag(vec S1)² Ã + 2 Bᵀ diag(s0)² B
//! t1 = −Ãᵀ (vec S1 ⊙ vec(S1 ⊙ A0 − Z̃1 + Λ̃1))
//! t2 = −2 Bᵀ (s0 ⊙ (s0 ⊙ b0 − z̃0 + λ̃0))
//! ```
//!
//! (the entire `x`-dependence of the gradient lives in `D`), followed by the
//! nonnegativity clip `x ← max(x, 0)`. The lifted scalar `x22` has its own
//! one-line update. Setting every `bᵢ = 0` recovers the standard-SDP
//! iteration with `x22 → 0`.
//!
//! The Boolean quadratic program specializes to elementary diagonal
//! constraint matrices: `D` collapses to a diagonal and the x-update to an
//! element-wise division. The multiplier of the lifted LMI is the
//! relaxation's matrix variable, so sign vectors are read off its last
//! column.

use std::path::Path;

use crate::eig;
use crate::error::{Error, Result};
use crate::linalg::{add_a_mul, at_mul, gram, sub_norm, Chol};
use crate::metric::Metric;
use crate::sdp::{Mode, SolveReport, SolverConfig};
use crate::symmat::SymMat;

#[derive(Debug, Clone)]
pub struct QcqpProblem {
    n: usize,
    m: usize,
    /// `A0..Am`.
    a_list: Vec<SymMat>,
    /// `b0..bm`.
    b_list: Vec<Vec<f64>>,
    /// `c1..cm`.
    c: Vec<f64>,
    /// `n² x m` column-major stack of `vec(A1..Am)`.
    a_tilde: Vec<f64>,
    /// `n x m` column-major `B = [b1 … bm]`.
    b_mat: Vec<f64>,
    /// Elementary-diagonal constraint structure with `B = 0` (the BQP
    /// shape); only set by [`QcqpProblem::bqp`] so the generic path stays
    /// testable against the fast one.
    diagonal: bool,
}

/// A lifted primal point and its assembled cone-side matrix.
#[derive(Debug, Clone)]
pub struct LiftedPoint {
    pub x: Vec<f64>,
    pub x22: f64,
    pub cone_matrix: SymMat,
}

impl QcqpProblem {
    pub fn new(a_list: Vec<SymMat>, b_list: Vec<Vec<f64>>, c: Vec<f64>) -> Result<Self> {
        Self::build(a_list, b_list, c, false)
    }

    fn build(
        a_list: Vec<SymMat>,
        b_list: Vec<Vec<f64>>,
        c: Vec<f64>,
        diagonal: bool,
    ) -> Result<Self> {
        if a_list.len() < 2 {
            return Err(Error::IllPosed("need A0 and at least one constraint matrix".into()));
        }
        let n = a_list[0].dim();
        let m = a_list.len() - 1;
        if b_list.len() != m + 1 {
            return Err(Error::LengthMismatch { expected: m + 1, got: b_list.len() });
        }
        if c.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: c.len() });
        }
        for a in &a_list {
            if a.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
            }
        }
        for b in &b_list {
            if b.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: b.len() });
            }
        }
        let mut a_tilde = Vec::with_capacity(n * n * m);
        for a in &a_list[1..] {
            a_tilde.extend_from_slice(a.as_slice());
        }
        let mut b_mat = Vec::with_capacity(n * m);
        for b in &b_list[1..] {
            b_mat.extend_from_slice(b);
        }
        Ok(QcqpProblem { n, m, a_list, b_list, c, a_tilde, b_mat, diagonal })
    }

    /// Boolean quadratic program: the relaxed constraints `(X1)ᵢᵢ ≤ 1` lift
    /// to elementary diagonal `Aᵢ`, `bᵢ = 0` and `cᵢ = −1`, so the primal
    /// objective is `⟨x, 1⟩ − x22` and the LMI is simply `A0 + Diag(x)`.
    pub fn bqp(a0: SymMat, b0: Vec<f64>) -> Result<Self> {
        let n = a0.dim();
        if b0.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: b0.len() });
        }
        let mut a_list = Vec::with_capacity(n + 1);
        a_list.push(a0);
        for i in 0..n {
            let mut e = SymMat::zeros(n);
            e.set_sym(i, i, 1.0);
            a_list.push(e);
        }
        let mut b_list = vec![vec![0.0; n]; n + 1];
        b_list[0] = b0;
        Self::build(a_list, b_list, vec![-1.0; n], true)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constraint_count(&self) -> usize {
        self.m
    }

    /// Dimension of the lifted cone.
    pub fn lifted_dim(&self) -> usize {
        self.n + 1
    }

    pub fn a_list(&self) -> &[SymMat] {
        &self.a_list
    }

    pub fn b_list(&self) -> &[Vec<f64>] {
        &self.b_list
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn is_diagonal_structured(&self) -> bool {
        self.diagonal
    }

    /// `A0 + Σ xᵢ Aᵢ` as a flat `n x n` buffer.
    pub(crate) fn lmi_block(&self, x: &[f64]) -> Vec<f64> {
        let mut top = self.a_list[0].as_slice().to_vec();
        if self.diagonal {
            for i in 0..self.n {
                top[i * self.n + i] += x[i];
            }
        } else {
            add_a_mul(&self.a_tilde, self.n * self.n, self.m, x, &mut top);
        }
        top
    }

    /// `b0 + Bx`.
    pub(crate) fn edge_block(&self, x: &[f64]) -> Vec<f64> {
        let mut edge = self.b_list[0].clone();
        if !self.diagonal {
            add_a_mul(&self.b_mat, self.n, self.m, x, &mut edge);
        }
        edge
    }

    fn assemble_into(&self, x: &[f64], x22: f64, cone: &mut [f64]) {
        let d = self.n + 1;
        debug_assert_eq!(cone.len(), d * d);
        let top = self.lmi_block(x);
        let edge = self.edge_block(x);
        for (i, &ei) in edge.iter().enumerate() {
            cone[i * d..i * d + self.n].copy_from_slice(&top[i * self.n..(i + 1) * self.n]);
            cone[i * d + self.n] = ei;
            cone[self.n * d + i] = ei;
        }
        cone[self.n * d + self.n] = -x22;
    }

    /// The lifted cone-side matrix `[[A0 + Σ xᵢAᵢ, b0 + Bx], [·ᵀ, −x22]]`.
    pub fn assemble_lifted(&self, x: &[f64], x22: f64) -> Result<LiftedPoint> {
        if x.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, got: x.len() });
        }
        let d = self.n + 1;
        let mut cone = vec![0.0; d * d];
        self.assemble_into(x, x22, &mut cone);
        Ok(LiftedPoint {
            x: x.to_vec(),
            x22,
            cone_matrix: SymMat::from_symmetric_unchecked(d, cone),
        })
    }

    // ---- text formats -----------------------------------------------------

    /// `n m` header, `A0..Am` fixtures, `b0..bm` one per line, then `c`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for a in &self.a_list {
            out.push_str(&a.to_text());
        }
        for b in &self.b_list {
            let row: Vec<String> = b.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        let c: Vec<String> = self.c.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&c.join(" "));
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty problem file".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let mut a_list = Vec::with_capacity(m + 1);
        for _ in 0..=m {
            let a = SymMat::from_lines(&mut lines)?;
            if a.dim() != n {
                return Err(Error::Parse(format!("matrix dimension {} != header {n}", a.dim())));
            }
            a_list.push(a);
        }
        let mut b_list = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let line =
                lines.next().ok_or_else(|| Error::Parse(format!("missing b[{i}] line")))?;
            let b: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(|t| t.parse::<f64>()).collect();
            b_list.push(b.map_err(|_| Error::Parse(format!("bad b[{i}] vector")))?);
        }
        let c_line = lines.next().ok_or_else(|| Error::Parse("missing c line".into()))?;
        let c: std::result::Result<Vec<f64>, _> =
            c_line.split_whitespace().map(|t| t.parse::<f64>()).collect();
        let c = c.map_err(|_| Error::Parse("bad c vector".into()))?;
        QcqpProblem::new(a_list, b_list, c)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        QcqpProblem::from_text(&std::fs::read_to_string(path)?)
    }

    /// BQP shortcut file: `A0` in fixture format, then `b0` on one line.
    pub fn bqp_from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let a0 = SymMat::from_lines(&mut lines)?;
        let line = lines.next().ok_or_else(|| Error::Parse("missing b0 line".into()))?;
        let b0: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(|t| t.parse::<f64>()).collect();
        QcqpProblem::bqp(a0, b0.map_err(|_| Error::Parse("bad b0 vector".into()))?)
    }

    pub fn bqp_to_text(a0: &SymMat, b0: &[f64]) -> String {
        let mut out = a0.to_text();
        let row: Vec<String> = b0.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
        out
    }
}

/// The default metric split for a lifted cone: the corner block is isolated
/// (`k = n` in dimension `n + 1`), because the lifted corner carries a fixed
/// unit scale on the dual side while the leading block scales with the data
/// — the most significant conditioning mismatch. The tuner's finite search
/// may override this choice.
pub fn default_lifted_metric(n: usize, gamma1: f64, gamma2: f64) -> Result<Metric> {
    Metric::new(n + 1, n, gamma1, gamma2)
}

/// Blocks of the lifted metric factor `√H`, partitioned conformally with the
/// lifted cone matrix.
#[derive(Debug, Clone)]
pub struct FactorBlocks {
    /// Top-left `n x n` block, flat.
    pub s1: Vec<f64>,
    /// First `n` entries of the last column.
    pub s0: Vec<f64>,
    /// Bottom-right corner.
    pub s22: f64,
}

impl FactorBlocks {
    /// Extracts the blocks of `√H` for a metric on the lifted cone.
    pub fn from_metric(metric: &Metric, n: usize) -> Result<Self> {
        if metric.dim() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, got: metric.dim() });
        }
        let f = metric.factor();
        let d = n + 1;
        let mut s1 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                s1[i * n + j] = f.get(i, j);
            }
        }
        let s0 = (0..n).map(|i| f.get(i, d - 1)).collect();
        Ok(FactorBlocks { s1, s0, s22: f.get(d - 1, d - 1) })
    }

    /// Constant factor `√γ` everywhere: the scalar-step special case.
    pub fn scalar(gamma: f64, n: usize) -> Self {
        let s = gamma.sqrt();
        FactorBlocks { s1: vec![s; n * n], s0: vec![s; n], s22: s }
    }
}

fn lifted_blocks(v: &SymMat) -> (Vec<f64>, Vec<f64>, f64) {
    let d = v.dim();
    let n = d - 1;
    let mut top = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            top[i * n + j] = v.get(i, j);
        }
    }
    let edge = (0..n).map(|i| v.get(i, n)).collect();
    (top, edge, v.get(n, n))
}

/// Prefactored x-update machinery for a fixed factor.
struct XUpdateCore {
    n: usize,
    m: usize,
    kind: XKind,
    /// `S1 ⊙ A0`.
    s1a0: Vec<f64>,
    /// `s0 ⊙ b0`.
    s0b0: Vec<f64>,
    s1: Vec<f64>,
    s22: f64,
    c: Vec<f64>,
}

enum XKind {
    Dense {
        /// `diag(vec S1) Ã`, column-major `n² x m`.
        ws: Vec<f64>,
        /// `diag(s0) B`, column-major `n x m`.
        bs: Vec<f64>,
        /// The full normal matrix, kept for the active-set refinement.
        d: Vec<f64>,
        chol: Chol,
    },
    /// Elementary-diagonal constraints with `B = 0`: `D = diag(S1ᵢᵢ²)` and
    /// the solve is an element-wise division.
    Diagonal { d: Vec<f64> },
}

impl XUpdateCore {
    fn new(p: &QcqpProblem, fb: &FactorBlocks) -> Result<Self> {
        let (n, m) = (p.n, p.m);
        if fb.s1.len() != n * n || fb.s0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: fb.s0.len() });
        }
        if !(fb.s22 > 0.0) {
            return Err(Error::InvalidMetric(format!("s22 = {} must be positive", fb.s22)));
        }
        let s1a0: Vec<f64> =
            p.a_list[0].as_slice().iter().zip(&fb.s1).map(|(a, s)| a * s).collect();
        let s0b0: Vec<f64> = p.b_list[0].iter().zip(&fb.s0).map(|(b, s)| b * s).collect();
        let kind = if p.diagonal {
            let d: Vec<f64> = (0..n)
                .map(|i| {
                    let s = fb.s1[i * n + i];
                    s * s
                })
                .collect();
            if d.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::IllPosed("singular diagonal x-update system".into()));
            }
            XKind::Diagonal { d }
        } else {
            let nsq = n * n;
            let mut ws = p.a_tilde.clone();
            for col in 0..m {
                for r in 0..nsq {
                    ws[col * nsq + r] *= fb.s1[r];
                }
            }
            let mut bs = p.b_mat.clone();
            for col in 0..m {
                for r in 0..n {
                    bs[col * n + r] *= fb.s0[r];
                }
            }
            let mut d = gram(&ws, nsq, m);
            let gb = gram(&bs, n, m);
            for (di, gi) in d.iter_mut().zip(&gb) {
                *di += 2.0 * gi;
            }
            if !(eig::eigvals(&d, m)?[0] > 0.0) {
                return Err(Error::IllPosed("x-update system D is not positive definite".into()));
            }
            let chol = Chol::factor(m, &d)
                .map_err(|_| Error::IllPosed("singular x-update system D".into()))?;
            XKind::Dense { ws, bs, d, chol }
        };
        Ok(XUpdateCore {
            n,
            m,
            kind,
            s1a0,
            s0b0,
            s1: fb.s1.clone(),
            s22: fb.s22,
            c: p.c.clone(),
        })
    }

    /// The stationarity right-hand side `t1 + t2 + c`.
    fn rhs(&self, zt1: &[f64], zt0: &[f64], lt1: &[f64], lt0: &[f64]) -> Vec<f64> {
        let (n, m) = (self.n, self.m);
        let nsq = n * n;
        match &self.kind {
            XKind::Dense { ws, bs, .. } => {
                let mut rhs = vec![0.0; m];
                // t1: ws already carries one factor of S1
                for (i, r) in rhs.iter_mut().enumerate() {
                    let col = &ws[i * nsq..(i + 1) * nsq];
                    let mut acc = 0.0;
                    for k in 0..nsq {
                        acc += col[k] * (self.s1a0[k] - zt1[k] + lt1[k]);
                    }
                    *r = -acc;
                }
                // t2: bs carries one factor of s0
                let tmp0: Vec<f64> =
                    (0..n).map(|k| self.s0b0[k] - zt0[k] + lt0[k]).collect();
                let t2 = at_mul(bs, n, m, &tmp0);
                for i in 0..m {
                    rhs[i] += -2.0 * t2[i] + self.c[i];
                }
                rhs
            }
            XKind::Diagonal { .. } => {
                let mut rhs = vec![0.0; n];
                for i in 0..n {
                    let s = self.s1[i * n + i];
                    rhs[i] = -s * (self.s1a0[i * n + i] - zt1[i * n + i] + lt1[i * n + i])
                        + self.c[i];
                }
                rhs
            }
        }
    }

    /// Unclipped stationary point of the smooth part of the x-subproblem:
    /// `D x = t1 + t2 + c`.
    fn solve_unclipped(&self, zt1: &[f64], zt0: &[f64], lt1: &[f64], lt0: &[f64]) -> Vec<f64> {
        let rhs = self.rhs(zt1, zt0, lt1, lt0);
        match &self.kind {
            XKind::Dense { chol, .. } => chol.solve(&rhs),
            XKind::Diagonal { d } => rhs.iter().zip(d).map(|(r, d)| r / d).collect(),
        }
    }

    /// Exact constrained x-update: the unclipped solution when it is already
    /// nonnegative (where the printed clip is exact), otherwise the
    /// active-set solve of the bounded subproblem.
    fn solve_nonneg(&self, zt1: &[f64], zt0: &[f64], lt1: &[f64], lt0: &[f64]) -> Result<Vec<f64>> {
        let rhs = self.rhs(zt1, zt0, lt1, lt0);
        match &self.kind {
            XKind::Diagonal { d } => {
                // separable: the clip is the exact minimizer
                Ok(rhs.iter().zip(d).map(|(r, d)| (r / d).max(0.0)).collect())
            }
            XKind::Dense { chol, d, .. } => {
                let u = chol.solve(&rhs);
                if u.iter().all(|v| *v >= 0.0) {
                    Ok(u)
                } else {
                    crate::linalg::nonneg_solve(self.m, d, &rhs)
                }
            }
        }
    }
}

/// The unclipped x-subproblem minimizer for an explicit factor and scaled
/// dual state; exposed so the stationarity of the update can be checked
/// against finite differences directly.
pub fn x_update_qcqp_unclipped(
    p: &QcqpProblem,
    factor: &FactorBlocks,
    zt: &SymMat,
    lt: &SymMat,
) -> Result<Vec<f64>> {
    if zt.dim() != p.n + 1 || lt.dim() != p.n + 1 {
        return Err(Error::DimensionMismatch { expected: p.n + 1, got: zt.dim() });
    }
    let core = XUpdateCore::new(p, factor)?;
    let (zt1, zt0, _) = lifted_blocks(zt);
    let (lt1, lt0, _) = lifted_blocks(lt);
    Ok(core.solve_unclipped(&zt1, &zt0, &lt1, &lt0))
}

/// The exact nonnegativity-constrained x-update used inside the solver
/// loops. It equals [`x_update_qcqp`] whenever the unclipped solution is
/// already nonnegative (and always for diagonal systems); when the bound is
/// active it refines the clip to the true constrained minimizer, so every
/// solver parameterization converges to the same fixed point.
pub fn x_update_qcqp_exact(
    p: &QcqpProblem,
    factor: &FactorBlocks,
    zt: &SymMat,
    lt: &SymMat,
) -> Result<Vec<f64>> {
    if zt.dim() != p.n + 1 || lt.dim() != p.n + 1 {
        return Err(Error::DimensionMismatch { expected: p.n + 1, got: zt.dim() });
    }
    let core = XUpdateCore::new(p, factor)?;
    let (zt1, zt0, _) = lifted_blocks(zt);
    let (lt1, lt0, _) = lifted_blocks(lt);
    core.solve_nonneg(&zt1, &zt0, &lt1, &lt0)
}

/// The closed-form x-update `max{D⁻¹(t1 + t2 + c), 0}`.
pub fn x_update_qcqp(
    p: &QcqpProblem,
    factor: &FactorBlocks,
    zt: &SymMat,
    lt: &SymMat,
) -> Result<Vec<f64>> {
    let mut x = x_update_qcqp_unclipped(p, factor, zt, lt)?;
    for v in &mut x {
        *v = v.max(0.0);
    }
    Ok(x)
}

/// Closed-form update of the lifted scalar:
/// `x22 = (1/s22)(−z̃22 + λ̃22 + 1/s22)`.
pub fn x22_update(s22: f64, z22: f64, l22: f64) -> Result<f64> {
    if !(s22 > 0.0) {
        return Err(Error::InvalidMetric(format!("s22 = {s22} must be positive")));
    }
    Ok((-z22 + l22 + 1.0 / s22) / s22)
}

/// Rank-1 tightness of a lifted relaxation matrix: the eigenvalue ratio
/// `λ2/λ1` of the leading block, flagged tight at `1e-6`.
pub fn tightness_check(cone_matrix: &SymMat) -> Result<(bool, f64)> {
    let d = cone_matrix.dim();
    if d < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: d });
    }
    let nb = d - 1;
    if nb == 1 {
        return Ok((true, 0.0));
    }
    let mut block = vec![0.0; nb * nb];
    for i in 0..nb {
        for j in 0..nb {
            block[i * nb + j] = cone_matrix.get(i, j);
        }
    }
    let w = eig::eigvals(&block, nb)?;
    let lead = w[nb - 1];
    if lead <= 1e-300 {
        return Ok((false, 1.0));
    }
    let ratio = (w[nb - 2] / lead).max(0.0);
    Ok((ratio <= 1e-6, ratio))
}

/// Solves the convexified QCQP from zero initialization (`Z = 0, Λ = 0`).
pub fn solve_qcqp(p: &QcqpProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    if let Some(r) = &cfg.reference {
        if r.len() != p.m {
            return Err(Error::LengthMismatch { expected: p.m, got: r.len() });
        }
    }
    match &cfg.mode {
        Mode::Scalar(gamma) => solve_qcqp_scalar(p, cfg, *gamma),
        Mode::Metric(metric) => solve_qcqp_metric(p, cfg, metric),
    }
}

fn solve_qcqp_metric(p: &QcqpProblem, cfg: &SolverConfig, metric: &Metric) -> Result<SolveReport> {
    let n = p.n;
    let d = n + 1;
    let dsq = d * d;
    let fb = FactorBlocks::from_metric(metric, n)?;
    let core = XUpdateCore::new(p, &fb)?;
    let fflat = metric.factor().as_slice().to_vec();
    let inv_f: Vec<f64> = fflat.iter().map(|v| v.recip()).collect();

    let mut z_t = vec![0.0; dsq];
    let mut l_t = vec![0.0; dsq];
    let mut x_t = vec![0.0; dsq];
    let mut t = vec![0.0; dsq];
    let mut z_new = vec![0.0; dsq];
    let mut cone = vec![0.0; dsq];
    let mut zt1 = vec![0.0; n * n];
    let mut lt1 = vec![0.0; n * n];
    let mut zt0 = vec![0.0; n];
    let mut lt0 = vec![0.0; n];

    let mut run = crate::sdp::run_state(cfg);
    let mut x = vec![0.0; p.m];
    let mut x22 = 0.0;
    let mut stop = None;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        for i in 0..n {
            for j in 0..n {
                zt1[i * n + j] = z_t[i * d + j];
                lt1[i * n + j] = l_t[i * d + j];
            }
            zt0[i] = z_t[i * d + n];
            lt0[i] = l_t[i * d + n];
        }
        x = core.solve_nonneg(&zt1, &zt0, &lt1, &lt0)?;
        x22 = x22_update(core.s22, z_t[dsq - 1], l_t[dsq - 1])?;

        p.assemble_into(&x, x22, &mut cone);
        for r in 0..dsq {
            x_t[r] = fflat[r] * cone[r];
        }
        let displacement = sub_norm(&x_t, &z_t);
        for r in 0..dsq {
            t[r] = x_t[r] + l_t[r];
        }
        eig::project_psd_into(&t, d, &mut z_new)?;
        let mut pr = 0.0;
        for r in 0..dsq {
            let dd = (x_t[r] - z_new[r]) * inv_f[r];
            pr += dd * dd;
            l_t[r] += x_t[r] - z_new[r];
        }
        std::mem::swap(&mut z_t, &mut z_new);

        stop = run.record(cfg, iterations, &x, pr.sqrt(), displacement)?;
        if stop.is_some() {
            break;
        }
    }
    let dual: Vec<f64> = l_t.iter().zip(&fflat).map(|(v, f)| v * f).collect();
    Ok(run.finish(
        iterations,
        x,
        Some(x22),
        SymMat::from_symmetric_unchecked(d, cone),
        SymMat::from_symmetric_unchecked(d, dual),
        stop,
    ))
}

fn solve_qcqp_scalar(p: &QcqpProblem, cfg: &SolverConfig, gamma: f64) -> Result<SolveReport> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidMetric(format!("scalar step {gamma} must be positive")));
    }
    let n = p.n;
    let d = n + 1;
    let dsq = d * d;
    let nsq = n * n;
    let a0 = p.a_list[0].as_slice();
    let b0 = &p.b_list[0];
    let sqrt_gamma = gamma.sqrt();

    // D0 = ÃᵀÃ + 2 BᵀB; the γ factors cancel against the rhs
    enum Solver {
        Dense { d0: Vec<f64>, chol: Chol },
        Diagonal(Vec<f64>),
    }
    let solver = if p.diagonal {
        // elementary diagonal constraints give the identity Gram matrix
        Solver::Diagonal(vec![1.0; n])
    } else {
        let mut d0 = gram(&p.a_tilde, nsq, p.m);
        let gb = gram(&p.b_mat, n, p.m);
        for (di, gi) in d0.iter_mut().zip(&gb) {
            *di += 2.0 * gi;
        }
        let chol = Chol::factor(p.m, &d0)
            .map_err(|_| Error::IllPosed("singular x-update system D".into()))?;
        Solver::Dense { d0, chol }
    };

    let mut z = vec![0.0; dsq];
    let mut lam = vec![0.0; dsq];
    let mut t = vec![0.0; dsq];
    let mut z_new = vec![0.0; dsq];
    let mut cone = vec![0.0; dsq];
    let mut tmp1 = vec![0.0; nsq];
    let mut tmp0 = vec![0.0; n];

    let mut run = crate::sdp::run_state(cfg);
    let mut x = vec![0.0; p.m];
    let mut x22 = 0.0;
    let mut stop = None;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        for i in 0..n {
            for j in 0..n {
                tmp1[i * n + j] = a0[i * n + j] - z[i * d + j] + lam[i * d + j] / gamma;
            }
            tmp0[i] = b0[i] - z[i * d + n] + lam[i * d + n] / gamma;
        }
        match &solver {
            Solver::Dense { d0, chol } => {
                let mut rhs = at_mul(&p.a_tilde, nsq, p.m, &tmp1);
                let t2 = at_mul(&p.b_mat, n, p.m, &tmp0);
                for i in 0..p.m {
                    rhs[i] = -rhs[i] - 2.0 * t2[i] + p.c[i] / gamma;
                }
                x = chol.solve(&rhs);
                if x.iter().any(|v| *v < 0.0) {
                    x = crate::linalg::nonneg_solve(p.m, d0, &rhs)?;
                }
            }
            Solver::Diagonal(dvals) => {
                // separable system: the clip is exact
                for i in 0..n {
                    x[i] = ((-tmp1[i * n + i] + p.c[i] / gamma) / dvals[i]).max(0.0);
                }
            }
        }
        x22 = -z[dsq - 1] + (lam[dsq - 1] + 1.0) / gamma;

        p.assemble_into(&x, x22, &mut cone);
        let displacement = sqrt_gamma * sub_norm(&cone, &z);
        for r in 0..dsq {
            t[r] = cone[r] + lam[r] / gamma;
        }
        eig::project_psd_into(&t, d, &mut z_new)?;
        let primal_residual = sub_norm(&cone, &z_new);
        for r in 0..dsq {
            lam[r] += gamma * (cone[r] - z_new[r]);
        }
        std::mem::swap(&mut z, &mut z_new);

        stop = run.record(cfg, iterations, &x, primal_residual, displacement)?;
        if stop.is_some() {
            break;
        }
    }
    Ok(run.finish(
        iterations,
        x,
        Some(x22),
        SymMat::from_symmetric_unchecked(d, cone),
        SymMat::from_symmetric_unchecked(d, lam),
        stop,
    ))
}

/// Outcome of solving the BQP relaxation.
#[derive(Debug, Clone)]
pub struct BqpOutcome {
    pub report: SolveReport,
    /// Signs read off the last column of the lifted relaxation solution.
    pub signs: Vec<f64>,
    /// The lifted relaxation solution matrix (the negated terminal dual; its
    /// corner is one at optimality).
    pub relaxation_matrix: SymMat,
}

/// Solves the BQP semidefinite relaxation of
/// `min sᵀA0s + 2b0ᵀs, s ∈ {−1, 1}ⁿ` and extracts a sign vector.
pub fn solve_bqp(a0: &SymMat, b0: &[f64], cfg: &SolverConfig) -> Result<BqpOutcome> {
    let p = QcqpProblem::bqp(a0.clone(), b0.to_vec())?;
    let report = solve_qcqp(&p, cfg)?;
    let n = a0.dim();
    let w = report.dual.scale(-1.0);
    let corner = w.get(n, n);
    let orient = if corner < 0.0 { -1.0 } else { 1.0 };
    let signs = (0..n)
        .map(|i| {
            let v = w.get(i, n) * orient;
            if v < 0.0 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    Ok(BqpOutcome { report, signs, relaxation_matrix: w })
}

/// Exhaustive ±1 minimizer of `sᵀ A0 s + 2 b0ᵀ s`; the ground-truth oracle
/// for small Boolean instances.
pub fn brute_force_bqp(a0: &SymMat, b0: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = a0.dim();
    if n > 20 {
        return Err(Error::IllPosed(format!("brute force limited to n <= 20, got {n}")));
    }
    let mut best = (Vec::new(), f64::INFINITY);
    let mut s = vec![0.0f64; n];
    for mask in 0u64..(1 << n) {
        for (i, si) in s.iter_mut().enumerate() {
            *si = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
        }
        let val = bqp_objective(a0, b0, &s);
        if val < best.1 {
            best = (s.clone(), val);
        }
    }
    Ok(best)
}

/// BQP objective `sᵀ A0 s + 2 b0ᵀ s` at a sign vector.
pub fn bqp_objective(a0: &SymMat, b0: &[f64], s: &[f64]) -> f64 {
    let quad = a0.matvec(s).iter().zip(s).map(|(a, b)| a * b).sum::<f64>();
    let lin: f64 = b0.iter().zip(s).map(|(a, b)| a * b).sum();
    quad + 2.0 * lin
}
