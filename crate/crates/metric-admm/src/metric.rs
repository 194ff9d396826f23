//! The definiteness-invariant block metric family.
//!
//! A metric is a positive-definite scaling `M(V) = H ⊙ V` where `H` is the
//! block-constant Hadamard factor
//!
//! ```text
//!       [ γ1/γ2 · 1   γ1 · 1   ]        k x k   | k x (n-k)
//! H  =  [ γ1    · 1   γ1γ2 · 1 ]        --------+----------
//! ```
//!
//! and `S(V) = √H ⊙ V` is its self-adjoint positive factor, so that
//! `⟨U, M V⟩ = ⟨S U, S V⟩`. The entrywise square-root factor preserves
//! positive semidefiniteness in both directions (a Schur-complement block
//! argument), which is exactly what makes the cone projection expressible in
//! closed form inside the metric space: `S⁻¹ ∘ Π ∘ S`.
//!
//! A metric is fully parameterized by `(k, γ1, γ2)`; it is never materialized
//! as an operator and every application is `O(n²)`.

use crate::error::{Error, Result};
use crate::symmat::{BlockPartition, SymMat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    partition: BlockPartition,
    gamma1: f64,
    gamma2: f64,
}

impl Metric {
    pub fn new(n: usize, k: usize, gamma1: f64, gamma2: f64) -> Result<Self> {
        let partition = BlockPartition::new(n, k)?;
        if !(gamma1 > 0.0) || !gamma1.is_finite() {
            return Err(Error::InvalidMetric(format!("gamma1 = {gamma1} must be positive")));
        }
        if !(gamma2 > 0.0) || !gamma2.is_finite() {
            return Err(Error::InvalidMetric(format!("gamma2 = {gamma2} must be positive")));
        }
        Ok(Metric { partition, gamma1, gamma2 })
    }

    pub fn dim(&self) -> usize {
        self.partition.n
    }

    pub fn split(&self) -> usize {
        self.partition.k
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// The three distinct entries of `H`: `(γ1/γ2, γ1, γ1·γ2)`.
    pub fn h_entries(&self) -> (f64, f64, f64) {
        (self.gamma1 / self.gamma2, self.gamma1, self.gamma1 * self.gamma2)
    }

    /// Smallest entry of `H`; a positive-definiteness margin for `M`.
    pub fn h_min(&self) -> f64 {
        let (h1, h0, h2) = self.h_entries();
        h1.min(h0).min(h2)
    }

    fn check_dim(&self, v: &SymMat) -> Result<()> {
        if v.dim() != self.partition.n {
            return Err(Error::DimensionMismatch { expected: self.partition.n, got: v.dim() });
        }
        Ok(())
    }

    fn hadamard_blocks(&self, v: &SymMat, e1: f64, e0: f64, e2: f64) -> SymMat {
        let (n, k) = (self.partition.n, self.partition.k);
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = if i < k && j < k {
                    e1
                } else if i >= k && j >= k {
                    e2
                } else {
                    e0
                };
                data.push(e * v.get(i, j));
            }
        }
        SymMat::from_symmetric_unchecked(n, data)
    }

    /// `M(V) = H ⊙ V`.
    pub fn apply_m(&self, v: &SymMat) -> Result<SymMat> {
        self.check_dim(v)?;
        let (h1, h0, h2) = self.h_entries();
        Ok(self.hadamard_blocks(v, h1, h0, h2))
    }

    /// `S(V) = √H ⊙ V`.
    pub fn apply_s(&self, v: &SymMat) -> Result<SymMat> {
        self.check_dim(v)?;
        let (h1, h0, h2) = self.h_entries();
        Ok(self.hadamard_blocks(v, h1.sqrt(), h0.sqrt(), h2.sqrt()))
    }

    /// `S⁻¹(V) = (1/√H) ⊙ V`.
    pub fn apply_s_inv(&self, v: &SymMat) -> Result<SymMat> {
        self.check_dim(v)?;
        let (h1, h0, h2) = self.h_entries();
        Ok(self.hadamard_blocks(v, h1.sqrt().recip(), h0.sqrt().recip(), h2.sqrt().recip()))
    }

    /// The factor `√H` itself, as a matrix of entries.
    pub fn factor(&self) -> SymMat {
        let ones = SymMat::from_symmetric_unchecked(
            self.partition.n,
            vec![1.0; self.partition.n * self.partition.n],
        );
        self.apply_s(&ones).expect("dimension fixed by construction")
    }

    /// Metric-induced norm `‖V‖_M = √⟨V, M V⟩`.
    pub fn m_norm(&self, v: &SymMat) -> Result<f64> {
        Ok(v.dot(&self.apply_m(v)?).max(0.0).sqrt())
    }

    /// Reports `(V ⪰ 0, S(V) ⪰ 0)`. For every metric in this family the two
    /// flags agree; the PSD tolerance is relative (`-1e-8 · ‖·‖`).
    pub fn invariance_holds(&self, v: &SymMat) -> Result<(bool, bool)> {
        self.check_dim(v)?;
        let sv = self.apply_s(v)?;
        Ok((v.is_psd(1e-8)?, sv.is_psd(1e-8)?))
    }

    /// Projection onto the PSD cone in the metric-induced norm:
    /// `S⁻¹(Π(S(V))) = argmin_{Z ⪰ 0} ½‖Z − V‖²_M`.
    pub fn scaled_projection(&self, v: &SymMat) -> Result<SymMat> {
        self.check_dim(v)?;
        self.apply_s_inv(&self.apply_s(v)?.project_psd()?)
    }
}
