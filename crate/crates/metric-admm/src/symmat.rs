//! Dense symmetric-matrix kernel: storage, vectorization, cone projection,
//! block partitioning and block norms.
//!
//! Every matrix is stored as a flat `n*n` buffer and symmetrized on
//! construction, because ADMM arithmetic accumulates asymmetric rounding.
//! For a symmetric buffer row-major and column-major layouts coincide; the
//! vectorization order is documented (and fixed) as column-major.

use std::fmt::Write as _;
use std::path::Path;

use crate::eig;
use crate::error::{Error, Result};

/// Symmetric `n x n` matrix. Values are immutable after construction and all
/// operations are pure, so sharing across threads is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

/// Split of an `n`-dimensional matrix into a leading `k x k` block, its
/// `k x (n-k)` off-diagonal complement and the trailing `(n-k) x (n-k)` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPartition {
    pub n: usize,
    pub k: usize,
}

impl BlockPartition {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k == 0 || k >= n {
            return Err(Error::InvalidPartition { k, n });
        }
        Ok(BlockPartition { n, k })
    }
}

/// Squared Frobenius norms of the three blocks under a partition.
///
/// The off-diagonal block appears twice in the matrix, so the full squared
/// norm decomposes as `v1 + 2*v0 + v2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockNorms {
    pub v1: f64,
    pub v0: f64,
    pub v2: f64,
}

impl BlockNorms {
    /// Total squared Frobenius norm reconstructed from the blocks.
    pub fn total(&self) -> f64 {
        self.v1 + 2.0 * self.v0 + self.v2
    }
}

impl SymMat {
    /// Symmetrizes an arbitrary square matrix as `(V + V^T) / 2`.
    ///
    /// `raw` is row-major with `rows * cols == raw.len()`.
    pub fn sym_from(rows: usize, cols: usize, raw: &[f64]) -> Result<Self> {
        if rows != cols {
            return Err(Error::NonSquare { rows, cols });
        }
        if raw.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, got: raw.len() });
        }
        if rows == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let n = rows;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = 0.5 * (raw[i * n + j] + raw[j * n + i]);
            }
        }
        Ok(SymMat { n, data })
    }

    /// Wraps a buffer that is already exactly symmetric. Used internally by
    /// operations that preserve symmetry entry by entry.
    pub(crate) fn from_symmetric_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        SymMat { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        SymMat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMat::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub(crate) fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Column-major vectorization of length `n^2`. For symmetric data this
    /// equals the row-major flattening, but the contract is column-major.
    pub fn vec(&self) -> Vec<f64> {
        self.data.clone()
    }

    /// Inverse of [`SymMat::vec`]: reshapes a length-`n^2` vector back into a
    /// symmetric matrix. The vector must describe a symmetric matrix up to a
    /// `1e-12` relative deviation.
    pub fn mat(n: usize, v: &[f64]) -> Result<Self> {
        if v.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: v.len() });
        }
        let scale = v.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1.0);
        let mut deviation = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                deviation = deviation.max((v[j * n + i] - v[i * n + j]).abs());
            }
        }
        if deviation > 1e-12 * scale {
            return Err(Error::NotSymmetric { deviation });
        }
        SymMat::sym_from(n, n, v)
    }

    /// Euclidean projection onto the positive semidefinite cone: the spectral
    /// clamp `U max(D, 0) U^T`.
    pub fn project_psd(&self) -> Result<Self> {
        let mut out = vec![0.0; self.n * self.n];
        eig::project_psd_into(&self.data, self.n, &mut out)?;
        Ok(SymMat::from_symmetric_unchecked(self.n, out))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eig::eigvals(&self.data, self.n)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// PSD test with a tolerance relative to the Frobenius norm; eigensolver
    /// noise scales with the matrix norm.
    pub fn is_psd(&self, rel_tol: f64) -> Result<bool> {
        let scale = self.norm().max(1e-300);
        Ok(self.min_eigenvalue()? >= -rel_tol * scale)
    }

    /// Squared Frobenius norms of the three blocks under split `p.k`.
    pub fn block_norms(&self, p: BlockPartition) -> Result<BlockNorms> {
        if p.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: p.n });
        }
        let (n, k) = (self.n, p.k);
        let (mut v1, mut v0, mut v2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let sq = self.data[i * n + j] * self.data[i * n + j];
                match (i < k, j < k) {
                    (true, true) => v1 += sq,
                    (false, false) => v2 += sq,
                    (true, false) => v0 += sq,
                    (false, true) => {} // mirror of the (true, false) block
                }
            }
        }
        Ok(BlockNorms { v1, v0, v2 })
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &SymMat) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        debug_assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        SymMat::from_symmetric_unchecked(self.n, data)
    }

    pub fn sub(&self, other: &SymMat) -> SymMat {
        debug_assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        SymMat::from_symmetric_unchecked(self.n, data)
    }

    pub fn scale(&self, s: f64) -> SymMat {
        SymMat::from_symmetric_unchecked(self.n, self.data.iter().map(|v| v * s).collect())
    }

    /// Entrywise product with another symmetric matrix.
    pub fn hadamard(&self, other: &SymMat) -> SymMat {
        debug_assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        SymMat::from_symmetric_unchecked(self.n, data)
    }

    /// Matrix-vector product (the matrix is symmetric, so no transpose case).
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        let n = self.n;
        let mut y = vec![0.0; n];
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.data[i * n..(i + 1) * n];
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    // ---- text fixture format -------------------------------------------

    /// Serializes to the fixture format: first line `n`, then `n` lines of
    /// `n` space-separated decimals (full round-trip precision).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for i in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|j| format!("{:?}", self.data[i * self.n + j])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parses the fixture format from an iterator over lines, consuming
    /// exactly `n + 1` lines.
    pub fn from_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Self> {
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing matrix dimension line".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad matrix dimension {header:?}")))?;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing matrix row {i}")))?;
            for tok in line.split_whitespace() {
                let v: f64 =
                    tok.parse().map_err(|_| Error::Parse(format!("bad entry {tok:?}")))?;
                data.push(v);
            }
            if data.len() != (i + 1) * n {
                return Err(Error::Parse(format!("row {i} does not have {n} entries")));
            }
        }
        SymMat::sym_from(n, n, &data)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        SymMat::from_lines(&mut text.lines())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        SymMat::from_text(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::Rng;

    fn random_sym(n: usize, rng: &mut Rng) -> SymMat {
        let raw: Vec<f64> = (0..n * n).map(|_| rng.normal(1.0)).collect();
        SymMat::sym_from(n, n, &raw).unwrap()
    }

    #[test]
    fn sym_from_identity_is_fixed_point() {
        let id = SymMat::identity(3);
        let again = SymMat::sym_from(3, 3, id.as_slice()).unwrap();
        assert_eq!(id, again);
    }

    #[test]
    fn sym_from_averages_with_transpose() {
        let m = SymMat::sym_from(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.as_slice(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn sym_from_output_equals_own_transpose() {
        let mut rng = Rng::new(7);
        let m = random_sym(5, &mut rng);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
    }

    #[test]
    fn sym_from_rejects_non_square() {
        assert!(matches!(
            SymMat::sym_from(2, 3, &[0.0; 6]),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn vec_of_identity_is_column_major() {
        assert_eq!(SymMat::identity(2).vec(), vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn mat_vec_round_trip() {
        let mut rng = Rng::new(11);
        for _ in 0..100 {
            let m = random_sym(4, &mut rng);
            let back = SymMat::mat(4, &m.vec()).unwrap();
            assert_eq!(m, back);
        }
    }

    #[test]
    fn mat_rejects_wrong_length_and_asymmetry() {
        assert!(matches!(SymMat::mat(2, &[1.0; 3]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(
            SymMat::mat(2, &[0.0, 1.0, -1.0, 0.0]),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn project_psd_keeps_identity() {
        let id = SymMat::identity(3);
        let p = id.project_psd().unwrap();
        assert!(p.sub(&id).norm() < 1e-14);
    }

    #[test]
    fn project_psd_clamps_negative_eigenvalue() {
        let m = SymMat::sym_from(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let p = m.project_psd().unwrap();
        assert!(p.sub(&SymMat::sym_from(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn project_psd_satisfies_variational_inequality() {
        // <Z - V, Y - Z> >= 0 for all PSD Y characterizes the projection Z.
        let mut rng = Rng::new(23);
        let v = random_sym(6, &mut rng);
        let z = v.project_psd().unwrap();
        let zv = z.sub(&v);
        for _ in 0..100 {
            let g = random_sym(6, &mut rng);
            // squared form is PSD by construction
            let mut y = SymMat::zeros(6);
            for i in 0..6 {
                for j in 0..6 {
                    let mut acc = 0.0;
                    for l in 0..6 {
                        acc += g.get(i, l) * g.get(j, l);
                    }
                    y.set_sym(i, j, acc);
                }
            }
            assert!(zv.dot(&y.sub(&z)) >= -1e-8 * (1.0 + y.norm()) * (1.0 + v.norm()));
        }
    }

    #[test]
    fn project_psd_is_idempotent_and_firmly_nonexpansive() {
        let mut rng = Rng::new(31);
        for _ in 0..20 {
            let v = random_sym(8, &mut rng);
            let w = random_sym(8, &mut rng);
            let pv = v.project_psd().unwrap();
            let pw = w.project_psd().unwrap();
            assert!(pv.project_psd().unwrap().sub(&pv).norm() <= 1e-10 * (1.0 + pv.norm()));
            let diff = pv.sub(&pw);
            assert!(diff.norm_sq() <= diff.dot(&v.sub(&w)) + 1e-8);
        }
    }

    #[test]
    fn block_norms_of_identity_split_diagonal_mass() {
        let id = SymMat::identity(4);
        let bn = id.block_norms(BlockPartition::new(4, 2).unwrap()).unwrap();
        assert_eq!((bn.v1, bn.v0, bn.v2), (2.0, 0.0, 2.0));
    }

    #[test]
    fn block_norms_of_ones_count_entries() {
        let ones = SymMat::sym_from(3, 3, &[1.0; 9]).unwrap();
        let bn = ones.block_norms(BlockPartition::new(3, 1).unwrap()).unwrap();
        assert_eq!((bn.v1, bn.v0, bn.v2), (1.0, 2.0, 4.0));
    }

    #[test]
    fn block_norms_reconstruct_total_for_every_split() {
        let mut rng = Rng::new(47);
        let m = random_sym(7, &mut rng);
        for k in 1..7 {
            let bn = m.block_norms(BlockPartition::new(7, k).unwrap()).unwrap();
            let total = m.norm_sq();
            assert!((bn.total() - total).abs() <= 1e-12 * total);
        }
    }

    #[test]
    fn block_norms_reject_partition_mismatch() {
        let m = SymMat::identity(4);
        assert!(m.block_norms(BlockPartition::new(5, 2).unwrap()).is_err());
    }

    #[test]
    fn text_fixture_round_trips() {
        let mut rng = Rng::new(3);
        let m = random_sym(5, &mut rng);
        let back = SymMat::from_text(&m.to_text()).unwrap();
        assert_eq!(m, back);
    }
}
