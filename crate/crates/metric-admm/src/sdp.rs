//! Standard-form SDP model and the scalar / metric ADMM solvers.
//!
//! The problem is `minimize ⟨c, x⟩ subject to A0 + Σ xᵢ Aᵢ ⪰ 0`. Both solver
//! modes split the linear matrix inequality off with an auxiliary cone
//! variable and alternate a least-squares x-update, a cone projection and a
//! dual ascent step:
//!
//! * scalar mode runs the classic γ-penalized iteration in the original
//!   variables;
//! * metric mode runs the scaled iteration `X̃ = S𝒜x`, `Z̃ = SZ`,
//!   `Λ̃ = S⁻¹Λ`, whose projection step stays a plain eigenvalue clamp
//!   because the factor `S` preserves definiteness. The x-update is not
//!   scaled, so the terminal `x` is the problem solution directly.
//!
//! Every run records the fixed-point displacement `‖ζ^{k+1} − ζ^k‖` of the
//! underlying averaged fixed-point operator (`ζ^k = Z̃^k + Λ̃^k`); that
//! sequence is non-increasing for any positive step, which
//! [`residual_monotone`] verifies.

use std::path::Path;
use std::time::Instant;

use crate::eig;
use crate::error::{Error, Result};
use crate::linalg::{add_a_mul, at_mul, gram, sub_norm, Chol};
use crate::metric::Metric;
use crate::symmat::SymMat;

/// Step-size family for a solve.
#[derive(Debug, Clone)]
pub enum Mode {
    /// Classic scalar step `γ > 0`.
    Scalar(f64),
    /// Block metric on the cone space.
    Metric(Metric),
}

/// Stopping rule outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `(1/len) ‖x − x⋆‖² ≤ eps` against a supplied reference solution.
    ReferenceError,
    /// Fixed-point displacement `‖ζ^{k+1} − ζ^k‖ ≤ eps` (no reference given).
    FixedPointDisplacement,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Stopping threshold; interpretation depends on whether a reference is
    /// supplied.
    pub eps: f64,
    pub max_iter: u64,
    /// Known solution for the mean-squared-error stopping rule.
    pub reference: Option<Vec<f64>>,
    /// Record the x-iterate at every step (for iterate-level comparisons).
    pub trace_x: bool,
}

impl SolverConfig {
    pub fn scalar(gamma: f64) -> Self {
        SolverConfig {
            mode: Mode::Scalar(gamma),
            eps: 1e-8,
            max_iter: 200_000,
            reference: None,
            trace_x: false,
        }
    }

    pub fn metric(metric: Metric) -> Self {
        SolverConfig {
            mode: Mode::Metric(metric),
            eps: 1e-8,
            max_iter: 200_000,
            reference: None,
            trace_x: false,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_iter(mut self, max_iter: u64) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_reference(mut self, x_star: Vec<f64>) -> Self {
        self.reference = Some(x_star);
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.trace_x = true;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let Mode::Scalar(g) = self.mode {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidMetric(format!("scalar step {g} must be positive")));
            }
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidMetric(format!("eps {} must be positive", self.eps)));
        }
        Ok(())
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct IterStat {
    /// Unscaled primal residual `‖𝒜x − Z‖`.
    pub primal_residual: f64,
    /// Fixed-point displacement `‖ζ^{k+1} − ζ^k‖`.
    pub displacement: f64,
    /// `(1/len) ‖x − x⋆‖²` when a reference is available.
    pub error_to_reference: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub iterations: u64,
    /// Terminal decision vector.
    pub x: Vec<f64>,
    /// Terminal lifted scalar, present for the QCQP solver only.
    pub x22: Option<f64>,
    /// Terminal cone-side point `𝒜X` (unscaled).
    pub cone_point: SymMat,
    /// Terminal dual variable `Λ` (unscaled).
    pub dual: SymMat,
    pub history: Vec<IterStat>,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub wall_ms: f64,
    /// x-iterate trace when requested by the config.
    pub x_trace: Option<Vec<Vec<f64>>>,
}

impl SolveReport {
    /// Per-iteration CSV: `iter,primal_residual,fixed_point_displacement,error_to_reference`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,primal_residual,fixed_point_displacement,error_to_reference\n");
        for (i, s) in self.history.iter().enumerate() {
            let err = s.error_to_reference.map(|e| format!("{e:.17e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{}\n",
                i + 1,
                s.primal_residual,
                s.displacement,
                err
            ));
        }
        out
    }
}

/// True when the displacement sequence never increases beyond a `1e-12`
/// slack relative to its initial value.
pub fn residual_monotone(report: &SolveReport) -> bool {
    let disps: Vec<f64> = report.history.iter().map(|s| s.displacement).collect();
    if disps.len() < 2 {
        return true;
    }
    let slack = 1e-12 * disps[0].max(1e-300);
    disps.windows(2).all(|w| w[1] <= w[0] + slack)
}

/// Standard-form SDP data.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    n: usize,
    m: usize,
    a0: SymMat,
    a_list: Vec<SymMat>,
    c: Vec<f64>,
    /// Column `i` is the vectorization of `A_{i+1}`; `n² x m`, column-major.
    a_tilde: Vec<f64>,
}

impl SdpProblem {
    pub fn new(a0: SymMat, a_list: Vec<SymMat>, c: Vec<f64>) -> Result<Self> {
        let n = a0.dim();
        let m = a_list.len();
        if m == 0 {
            return Err(Error::IllPosed("no constraint matrices".into()));
        }
        if c.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: c.len() });
        }
        for a in &a_list {
            if a.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.dim() });
            }
        }
        let mut a_tilde = Vec::with_capacity(n * n * m);
        for a in &a_list {
            a_tilde.extend_from_slice(a.as_slice());
        }
        // injectivity of the vectorized map, otherwise the x-update is
        // ill-posed (duplicated or contradicted constraints)
        let g = gram(&a_tilde, n * n, m);
        let eigs = eig::eigvals(&g, m)?;
        let sv_max = eigs[m - 1].max(0.0).sqrt();
        let sv_min = eigs[0].max(0.0).sqrt();
        if sv_min <= 1e-10 * sv_max {
            return Err(Error::IllPosed(format!(
                "constraint matrices are linearly dependent (σ_min = {sv_min:.3e}, σ_max = {sv_max:.3e})"
            )));
        }
        Ok(SdpProblem { n, m, a0, a_list, c, a_tilde })
    }

    pub fn lmi_dim(&self) -> usize {
        self.n
    }

    pub fn var_count(&self) -> usize {
        self.m
    }

    pub fn a0(&self) -> &SymMat {
        &self.a0
    }

    pub fn a_list(&self) -> &[SymMat] {
        &self.a_list
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// The affine map `𝒜(x) = A0 + Σ xᵢ Aᵢ`.
    pub fn apply_a(&self, x: &[f64]) -> Result<SymMat> {
        if x.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, got: x.len() });
        }
        let mut out = self.a0.as_slice().to_vec();
        add_a_mul(&self.a_tilde, self.n * self.n, self.m, x, &mut out);
        Ok(SymMat::from_symmetric_unchecked(self.n, out))
    }

    // ---- text format ----------------------------------------------------

    /// `n m` header, then `A0..Am` in the matrix fixture format, then `c`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        out.push_str(&self.a0.to_text());
        for a in &self.a_list {
            out.push_str(&a.to_text());
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
        let a0 = SymMat::from_lines(&mut lines)?;
        if a0.dim() != n {
            return Err(Error::Parse(format!("A0 dimension {} != header {n}", a0.dim())));
        }
        let mut a_list = Vec::with_capacity(m);
        for _ in 0..m {
            a_list.push(SymMat::from_lines(&mut lines)?);
        }
        let c_line = lines.next().ok_or_else(|| Error::Parse("missing c line".into()))?;
        let c: std::result::Result<Vec<f64>, _> =
            c_line.split_whitespace().map(|t| t.parse::<f64>()).collect();
        let c = c.map_err(|_| Error::Parse("bad c vector".into()))?;
        SdpProblem::new(a0, a_list, c)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        SdpProblem::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Prefactored x-update: `argmin ⟨c, x⟩ + ½‖S𝒜(x) − target‖²` via the normal
/// equations of the scaled design matrix.
struct XUpdate {
    nsq: usize,
    m: usize,
    /// `diag(vec √H) · Ã`, column-major.
    ws: Vec<f64>,
    chol: Chol,
    /// `√H ⊙ A0`, flat.
    scaled_a0: Vec<f64>,
    c: Vec<f64>,
}

impl XUpdate {
    fn new(p: &SdpProblem, metric: Option<&Metric>) -> Result<Self> {
        let nsq = p.n * p.n;
        let factor: Option<Vec<f64>> = match metric {
            Some(met) => {
                if met.dim() != p.n {
                    return Err(Error::DimensionMismatch { expected: p.n, got: met.dim() });
                }
                Some(met.factor().as_slice().to_vec())
            }
            None => None,
        };
        let mut ws = p.a_tilde.clone();
        if let Some(f) = &factor {
            for col in 0..p.m {
                for r in 0..nsq {
                    ws[col * nsq + r] *= f[r];
                }
            }
        }
        let chol = Chol::factor(p.m, &gram(&ws, nsq, p.m))?;
        let scaled_a0 = match &factor {
            Some(f) => p.a0.as_slice().iter().zip(f).map(|(a, f)| a * f).collect(),
            None => p.a0.as_slice().to_vec(),
        };
        Ok(XUpdate { nsq, m: p.m, ws, chol, scaled_a0, c: p.c.clone() })
    }

    /// Stationarity system: `Ws^T Ws x = Ws^T (vec target − vec(√H ⊙ A0)) − c`.
    fn solve(&self, target: &[f64]) -> Vec<f64> {
        debug_assert_eq!(target.len(), self.nsq);
        let resid: Vec<f64> =
            target.iter().zip(&self.scaled_a0).map(|(t, a)| t - a).collect();
        let mut rhs = at_mul(&self.ws, self.nsq, self.m, &resid);
        for (r, c) in rhs.iter_mut().zip(&self.c) {
            *r -= c;
        }
        self.chol.solve(&rhs)
    }

    /// `√H ⊙ 𝒜(x)` written into `out`.
    fn scaled_cone_point(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.scaled_a0);
        add_a_mul(&self.ws, self.nsq, self.m, x, out);
    }
}

/// One-shot x-update against an explicit (already scaled) target; `metric =
/// None` means the Euclidean case `S = I`.
pub fn x_update_primal(p: &SdpProblem, target: &SymMat, metric: Option<&Metric>) -> Result<Vec<f64>> {
    if target.dim() != p.n {
        return Err(Error::DimensionMismatch { expected: p.n, got: target.dim() });
    }
    Ok(XUpdate::new(p, metric)?.solve(target.as_slice()))
}

pub(crate) struct RunState {
    history: Vec<IterStat>,
    x_trace: Option<Vec<Vec<f64>>>,
    started: Instant,
}

/// Shared bookkeeping for the solver loops (also used by the QCQP solver).
pub(crate) fn run_state(cfg: &SolverConfig) -> RunState {
    RunState::new(cfg)
}

impl RunState {
    fn new(cfg: &SolverConfig) -> Self {
        RunState {
            history: Vec::new(),
            x_trace: cfg.trace_x.then(Vec::new),
            started: Instant::now(),
        }
    }

    /// Records one iteration; returns the stop reason when the rule fires.
    pub(crate) fn record(
        &mut self,
        cfg: &SolverConfig,
        iteration: u64,
        x: &[f64],
        primal_residual: f64,
        displacement: f64,
    ) -> Result<Option<StopReason>> {
        if !displacement.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolverBlowup { iteration });
        }
        let error_to_reference = cfg
            .reference
            .as_ref()
            .map(|r| x.iter().zip(r).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / r.len() as f64);
        self.history.push(IterStat { primal_residual, displacement, error_to_reference });
        if let Some(t) = &mut self.x_trace {
            t.push(x.to_vec());
        }
        let stop = match error_to_reference {
            Some(err) if err <= cfg.eps => Some(StopReason::ReferenceError),
            None if displacement <= cfg.eps => Some(StopReason::FixedPointDisplacement),
            _ => None,
        };
        Ok(stop)
    }

    pub(crate) fn finish(
        self,
        iterations: u64,
        x: Vec<f64>,
        x22: Option<f64>,
        cone_point: SymMat,
        dual: SymMat,
        stop: Option<StopReason>,
    ) -> SolveReport {
        SolveReport {
            iterations,
            x,
            x22,
            cone_point,
            dual,
            history: self.history,
            converged: stop.is_some(),
            stop_reason: stop.unwrap_or(StopReason::MaxIterations),
            wall_ms: self.started.elapsed().as_secs_f64() * 1e3,
            x_trace: self.x_trace,
        }
    }
}

/// Solves the standard-form SDP with the configured mode, starting from
/// `Z = 0, Λ = 0`.
pub fn solve_standard_sdp(p: &SdpProblem, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    if let Some(r) = &cfg.reference {
        if r.len() != p.m {
            return Err(Error::LengthMismatch { expected: p.m, got: r.len() });
        }
    }
    match &cfg.mode {
        Mode::Scalar(gamma) => solve_sdp_scalar(p, cfg, *gamma),
        Mode::Metric(metric) => solve_sdp_metric(p, cfg, metric),
    }
}

fn solve_sdp_scalar(p: &SdpProblem, cfg: &SolverConfig, gamma: f64) -> Result<SolveReport> {
    let nsq = p.n * p.n;
    // unscaled iteration: the γ-dependence enters through the x-update rhs
    // and the dual step only
    let chol = Chol::factor(p.m, &gram(&p.a_tilde, nsq, p.m))?;
    let a0 = p.a0.as_slice();
    let mut z = vec![0.0; nsq];
    let mut lam = vec![0.0; nsq];
    let mut cone = vec![0.0; nsq];
    let mut t = vec![0.0; nsq];
    let mut z_new = vec![0.0; nsq];
    let mut resid = vec![0.0; nsq];
    let sqrt_gamma = gamma.sqrt();

    let mut state = RunState::new(cfg);
    let mut x = vec![0.0; p.m];
    let mut stop = None;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        // x-update: argmin ⟨c,x⟩ + (γ/2)‖𝒜x − Z + Λ/γ‖²
        for r in 0..nsq {
            resid[r] = z[r] - lam[r] / gamma - a0[r];
        }
        let mut rhs = at_mul(&p.a_tilde, nsq, p.m, &resid);
        for (r, c) in rhs.iter_mut().zip(&p.c) {
            *r -= c / gamma;
        }
        x = chol.solve(&rhs);

        cone.copy_from_slice(a0);
        add_a_mul(&p.a_tilde, nsq, p.m, &x, &mut cone);

        // ζ-displacement in the √γ-scaled geometry
        let displacement = sqrt_gamma * sub_norm(&cone, &z);

        for r in 0..nsq {
            t[r] = cone[r] + lam[r] / gamma;
        }
        eig::project_psd_into(&t, p.n, &mut z_new)?;

        let primal_residual = sub_norm(&cone, &z_new);
        for r in 0..nsq {
            lam[r] += gamma * (cone[r] - z_new[r]);
        }
        std::mem::swap(&mut z, &mut z_new);

        stop = state.record(cfg, iterations, &x, primal_residual, displacement)?;
        if stop.is_some() {
            break;
        }
    }
    Ok(state.finish(
        iterations,
        x,
        None,
        SymMat::from_symmetric_unchecked(p.n, cone),
        SymMat::from_symmetric_unchecked(p.n, lam),
        stop,
    ))
}

fn solve_sdp_metric(p: &SdpProblem, cfg: &SolverConfig, metric: &Metric) -> Result<SolveReport> {
    let nsq = p.n * p.n;
    let upd = XUpdate::new(p, Some(metric))?;
    let f = metric.factor();
    let fvec = f.as_slice();
    let inv_f: Vec<f64> = fvec.iter().map(|v| v.recip()).collect();

    let mut z_t = vec![0.0; nsq];
    let mut l_t = vec![0.0; nsq];
    let mut x_t = vec![0.0; nsq];
    let mut t = vec![0.0; nsq];
    let mut z_new = vec![0.0; nsq];
    let mut target = vec![0.0; nsq];

    let mut state = RunState::new(cfg);
    let mut x = vec![0.0; p.m];
    let mut stop = None;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        for r in 0..nsq {
            target[r] = z_t[r] - l_t[r];
        }
        x = upd.solve(&target);
        upd.scaled_cone_point(&x, &mut x_t);

        let displacement = sub_norm(&x_t, &z_t);

        for r in 0..nsq {
            t[r] = x_t[r] + l_t[r];
        }
        eig::project_psd_into(&t, p.n, &mut z_new)?;

        let mut pr = 0.0;
        for r in 0..nsq {
            let d = (x_t[r] - z_new[r]) * inv_f[r];
            pr += d * d;
            l_t[r] += x_t[r] - z_new[r];
        }
        std::mem::swap(&mut z_t, &mut z_new);

        stop = state.record(cfg, iterations, &x, pr.sqrt(), displacement)?;
        if stop.is_some() {
            break;
        }
    }
    // unscale the terminal variables: 𝒜x = S⁻¹X̃, Λ = S Λ̃
    let cone: Vec<f64> = x_t.iter().zip(&inv_f).map(|(v, i)| v * i).collect();
    let dual: Vec<f64> = l_t.iter().zip(fvec).map(|(v, f)| v * f).collect();
    Ok(state.finish(
        iterations,
        x,
        None,
        SymMat::from_symmetric_unchecked(p.n, cone),
        SymMat::from_symmetric_unchecked(p.n, dual),
        stop,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::Rng;

    fn random_sym(n: usize, rng: &mut Rng) -> SymMat {
        let raw: Vec<f64> = (0..n * n).map(|_| rng.normal(1.0)).collect();
        SymMat::sym_from(n, n, &raw).unwrap()
    }

    fn random_psd(n: usize, rng: &mut Rng) -> SymMat {
        let g = random_sym(n, rng);
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += g.get(i, l) * g.get(j, l);
                }
                data[i * n + j] = acc;
            }
        }
        SymMat::sym_from(n, n, &data).unwrap()
    }

    /// Feasible, bounded instance: strictly feasible at x = 0 and the cost is
    /// a PSD combination of the constraint matrices.
    pub(crate) fn solvable_instance(n: usize, m: usize, rng: &mut Rng) -> SdpProblem {
        let a0 = random_psd(n, rng).add(&SymMat::identity(n).scale(0.5));
        let a_list: Vec<SymMat> = (0..m).map(|_| random_sym(n, rng)).collect();
        let w = random_psd(n, rng).scale(1.0 / n as f64);
        let c: Vec<f64> = a_list.iter().map(|a| a.dot(&w)).collect();
        SdpProblem::new(a0, a_list, c).unwrap()
    }

    #[test]
    fn construction_rejects_dependent_constraints() {
        let a = SymMat::identity(3);
        let err = SdpProblem::new(
            SymMat::identity(3),
            vec![a.clone(), a.scale(2.0)],
            vec![1.0, 1.0],
        );
        assert!(matches!(err, Err(Error::IllPosed(_))));
    }

    #[test]
    fn x_update_zero_cost_zero_residual_point() {
        let mut rng = Rng::new(1);
        let n = 5;
        let a0 = random_sym(n, &mut rng);
        let a_list: Vec<SymMat> = (0..3).map(|_| random_sym(n, &mut rng)).collect();
        let p = SdpProblem::new(a0.clone(), a_list, vec![0.0; 3]).unwrap();
        let metric = Metric::new(n, 2, 1.7, 0.6).unwrap();
        let target = metric.apply_s(&a0).unwrap();
        let x = x_update_primal(&p, &target, Some(&metric)).unwrap();
        assert!(x.iter().all(|v| v.abs() < 1e-10), "{x:?}");
    }

    #[test]
    fn x_update_matches_pseudo_inverse_least_squares() {
        let mut rng = Rng::new(2);
        let n = 4;
        let m = 3;
        let a0 = random_sym(n, &mut rng);
        let a_list: Vec<SymMat> = (0..m).map(|_| random_sym(n, &mut rng)).collect();
        let p = SdpProblem::new(a0.clone(), a_list.clone(), vec![0.0; m]).unwrap();
        let target = random_sym(n, &mut rng);
        let x = x_update_primal(&p, &target, None).unwrap();

        // eigendecomposition-based pseudo-inverse of the Gram matrix
        let r: Vec<f64> = target
            .as_slice()
            .iter()
            .zip(a0.as_slice())
            .map(|(t, a)| t - a)
            .collect();
        let g = gram(&p.a_tilde, n * n, m);
        let (w, v) = crate::eig::eigh(&g, m).unwrap();
        let aty = at_mul(&p.a_tilde, n * n, m, &r);
        let mut expected = vec![0.0; m];
        for j in 0..m {
            if w[j] <= 1e-12 * w[m - 1] {
                continue;
            }
            let vj = &v[j * m..(j + 1) * m];
            let coef: f64 = vj.iter().zip(&aty).map(|(a, b)| a * b).sum::<f64>() / w[j];
            for i in 0..m {
                expected[i] += coef * vj[i];
            }
        }
        for i in 0..m {
            assert!((x[i] - expected[i]).abs() <= 1e-9 * (1.0 + expected[i].abs()));
        }
    }

    #[test]
    fn x_update_gradient_vanishes() {
        let mut rng = Rng::new(3);
        let n = 5;
        let m = 3;
        let a0 = random_sym(n, &mut rng);
        let a_list: Vec<SymMat> = (0..m).map(|_| random_sym(n, &mut rng)).collect();
        let c = vec![0.3, -0.7, 1.1];
        let p = SdpProblem::new(a0, a_list, c.clone()).unwrap();
        let metric = Metric::new(n, 3, 0.8, 2.3).unwrap();
        let target = random_sym(n, &mut rng);
        let x = x_update_primal(&p, &target, Some(&metric)).unwrap();

        let objective = |x: &[f64]| -> f64 {
            let ax = p.apply_a(x).unwrap();
            let sax = metric.apply_s(&ax).unwrap();
            let d = sax.sub(&target);
            c.iter().zip(x).map(|(ci, xi)| ci * xi).sum::<f64>() + 0.5 * d.norm_sq()
        };
        let h = 1e-5;
        for i in 0..m {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let grad = (objective(&xp) - objective(&xm)) / (2.0 * h);
            assert!(grad.abs() <= 1e-6 * (1.0 + objective(&x).abs()), "grad[{i}] = {grad}");
        }
    }

    #[test]
    fn unit_metric_matches_unit_scalar_iterates() {
        let mut rng = Rng::new(4);
        let p = solvable_instance(6, 3, &mut rng);
        let scalar = solve_standard_sdp(
            &p,
            &SolverConfig::scalar(1.0).with_eps(1e-300).with_max_iter(50).with_trace(),
        )
        .unwrap();
        let metric = Metric::new(6, 2, 1.0, 1.0).unwrap();
        let metr = solve_standard_sdp(
            &p,
            &SolverConfig::metric(metric).with_eps(1e-300).with_max_iter(50).with_trace(),
        )
        .unwrap();
        let ts = scalar.x_trace.unwrap();
        let tm = metr.x_trace.unwrap();
        for (a, b) in ts.iter().zip(&tm) {
            let diff = sub_norm(a, b);
            let scale = crate::linalg::norm(a).max(1.0);
            assert!(diff <= 1e-12 * scale, "iterates diverge: {diff}");
        }
    }

    #[test]
    fn analytic_two_by_two_boundary_solution() {
        // minimize x s.t. diag(x-1, x) ⪰ 0 has solution x = 1
        let a0 = SymMat::sym_from(2, 2, &[-1.0, 0.0, 0.0, 0.0]).unwrap();
        let a1 = SymMat::identity(2);
        let p = SdpProblem::new(a0, vec![a1], vec![1.0]).unwrap();
        let report =
            solve_standard_sdp(&p, &SolverConfig::scalar(1.0).with_eps(1e-12)).unwrap();
        assert!(report.converged);
        assert!((report.x[0] - 1.0).abs() < 1e-5, "x = {}", report.x[0]);
    }

    #[test]
    fn random_instance_satisfies_kkt_at_termination() {
        let mut rng = Rng::new(5);
        let p = solvable_instance(7, 4, &mut rng);
        let report = solve_standard_sdp(
            &p,
            &SolverConfig::scalar(1.0).with_eps(1e-11).with_max_iter(400_000),
        )
        .unwrap();
        assert!(report.converged);
        let scale = 1.0 + report.cone_point.norm();
        assert!(report.cone_point.min_eigenvalue().unwrap() >= -1e-6 * scale);
        // the ADMM multiplier sits in the polar cone; the classical dual is
        // its negation
        let w = report.dual.scale(-1.0);
        assert!(w.min_eigenvalue().unwrap() >= -1e-5 * (1.0 + w.norm()));
        for (i, a) in p.a_list().iter().enumerate() {
            let r = (p.c()[i] - a.dot(&w)).abs();
            assert!(r <= 1e-5 * (1.0 + p.c()[i].abs()), "stationarity[{i}] = {r}");
        }
        let comp = report.cone_point.dot(&w).abs();
        assert!(comp <= 1e-5 * scale * (1.0 + w.norm()), "complementarity = {comp}");
    }

    #[test]
    fn first_iterate_matches_zero_target_x_update() {
        let mut rng = Rng::new(6);
        let p = solvable_instance(5, 3, &mut rng);
        let metric = Metric::new(5, 2, 1.4, 0.7).unwrap();
        let report = solve_standard_sdp(
            &p,
            &SolverConfig::metric(metric).with_eps(1e-300).with_max_iter(1).with_trace(),
        )
        .unwrap();
        let direct = x_update_primal(&p, &SymMat::zeros(5), Some(&metric)).unwrap();
        assert_eq!(report.x_trace.unwrap()[0], direct);
    }

    #[test]
    fn displacement_monotone_even_for_large_steps() {
        let mut rng = Rng::new(7);
        let p = solvable_instance(6, 3, &mut rng);
        for gamma in [0.05, 1.0, 100.0] {
            let report = solve_standard_sdp(
                &p,
                &SolverConfig::scalar(gamma).with_eps(1e-9).with_max_iter(5_000),
            )
            .unwrap();
            assert!(residual_monotone(&report), "gamma = {gamma}");
        }
    }

    #[test]
    fn injected_increase_fails_monotonicity() {
        let mut rng = Rng::new(8);
        let p = solvable_instance(4, 2, &mut rng);
        let mut report =
            solve_standard_sdp(&p, &SolverConfig::scalar(1.0).with_max_iter(50)).unwrap();
        assert!(residual_monotone(&report));
        let last = report.history.len() - 1;
        report.history[last].displacement = report.history[0].displacement * 2.0;
        assert!(!residual_monotone(&report));
    }

    #[test]
    fn problem_file_round_trips() {
        let mut rng = Rng::new(9);
        let p = solvable_instance(4, 2, &mut rng);
        let q = SdpProblem::from_text(&p.to_text()).unwrap();
        assert_eq!(p.a0(), q.a0());
        assert_eq!(p.a_list(), q.a_list());
        assert_eq!(p.c(), q.c());
    }
}
