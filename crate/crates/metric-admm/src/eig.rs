//! Dense symmetric eigendecomposition backed by LAPACK's `dsyevd`.
//!
//! The solvers perform one full eigendecomposition per iteration, so this is
//! the hot path of the whole crate. Workspaces are cached per thread and the
//! clamped spectral reconstruction used by the cone projection goes through
//! `dsyrk` instead of a hand-written triple loop.
//!
//! Requires a system OpenBLAS (`libopenblas-dev` or equivalent).

use std::cell::RefCell;
use std::sync::Once;

use crate::error::{Error, Result};

#[link(name = "openblas")]
extern "C" {
    fn dsyevd_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );

    fn dsyrk_(
        uplo: *const u8,
        trans: *const u8,
        n: *const i32,
        k: *const i32,
        alpha: *const f64,
        a: *const f64,
        lda: *const i32,
        beta: *const f64,
        c: *mut f64,
        ldc: *const i32,
    );

    fn openblas_set_num_threads(n: i32);
}

/// Iteration-level math must be reproducible from the inputs alone, so the
/// BLAS backend is pinned to a single thread; parallelism lives at the
/// experiment-row level instead.
fn pin_blas_threads() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| unsafe { openblas_set_num_threads(1) });
}

struct Scratch {
    n: usize,
    a: Vec<f64>,
    w: Vec<f64>,
    work: Vec<f64>,
    iwork: Vec<i32>,
    lwork: i32,
    liwork: i32,
}

impl Scratch {
    fn new() -> Self {
        Scratch {
            n: 0,
            a: Vec::new(),
            w: Vec::new(),
            work: Vec::new(),
            iwork: Vec::new(),
            lwork: 0,
            liwork: 0,
        }
    }

    fn reserve(&mut self, n: usize) {
        if self.n == n {
            return;
        }
        pin_blas_threads();
        self.n = n;
        self.a.resize(n * n, 0.0);
        self.w.resize(n, 0.0);
        // workspace query
        let ni = n as i32;
        let (mut wkopt, mut iwkopt, mut info) = (0.0f64, 0i32, 0i32);
        unsafe {
            dsyevd_(
                &b'V',
                &b'L',
                &ni,
                self.a.as_mut_ptr(),
                &ni,
                self.w.as_mut_ptr(),
                &mut wkopt,
                &-1,
                &mut iwkopt,
                &-1,
                &mut info,
            );
        }
        self.lwork = wkopt as i32;
        self.liwork = iwkopt;
        self.work.resize(self.lwork as usize, 0.0);
        self.iwork.resize(self.liwork as usize, 0);
    }
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::new());
}

fn check_finite(a: &[f64]) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric("non-finite entry in eigendecomposition input".into()))
    }
}

/// Full spectral decomposition of a symmetric matrix given as a flat `n*n`
/// slice. Returns eigenvalues in ascending order and eigenvectors as the
/// columns of a column-major `n*n` buffer.
pub(crate) fn eigh(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    debug_assert_eq!(a.len(), n * n);
    check_finite(a)?;
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        s.reserve(n);
        s.a.copy_from_slice(a);
        let ni = n as i32;
        let mut info = 0i32;
        unsafe {
            dsyevd_(
                &b'V',
                &b'L',
                &ni,
                s.a.as_mut_ptr(),
                &ni,
                s.w.as_mut_ptr(),
                s.work.as_mut_ptr(),
                &s.lwork,
                s.iwork.as_mut_ptr(),
                &s.liwork,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::Numeric(format!("dsyevd failed with info = {info}")));
        }
        Ok((s.w.clone(), s.a.clone()))
    })
}

/// Eigenvalues only (ascending).
pub(crate) fn eigvals(a: &[f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    check_finite(a)?;
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        s.reserve(n);
        s.a.copy_from_slice(a);
        let ni = n as i32;
        let mut info = 0i32;
        // 'N' needs less workspace than the cached 'V' query, so reuse is safe.
        unsafe {
            dsyevd_(
                &b'N',
                &b'L',
                &ni,
                s.a.as_mut_ptr(),
                &ni,
                s.w.as_mut_ptr(),
                s.work.as_mut_ptr(),
                &s.lwork,
                s.iwork.as_mut_ptr(),
                &s.liwork,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::Numeric(format!("dsyevd failed with info = {info}")));
        }
        Ok(s.w.clone())
    })
}

/// Spectral clamp: reconstructs `sum_i max(w_i, 0) v_i v_i^T` into `out`.
///
/// `out` must be an `n*n` buffer; the input slice is untouched. Symmetry of
/// the result is exact because the strict upper triangle is mirrored from the
/// `dsyrk` lower triangle.
pub(crate) fn project_psd_into(a: &[f64], n: usize, out: &mut [f64]) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(out.len(), n * n);
    let (w, mut vecs) = eigh(a, n)?;
    let first_pos = w.partition_point(|&x| x <= 0.0);
    let k = n - first_pos;
    if k == 0 {
        out.fill(0.0);
        return Ok(());
    }
    // scale the positive-eigenvalue columns by sqrt(w) in place
    for (j, &wj) in w.iter().enumerate().skip(first_pos) {
        let s = wj.sqrt();
        for v in &mut vecs[j * n..(j + 1) * n] {
            *v *= s;
        }
    }
    let ni = n as i32;
    let ki = k as i32;
    out.fill(0.0);
    unsafe {
        dsyrk_(
            &b'L',
            &b'N',
            &ni,
            &ki,
            &1.0,
            vecs[first_pos * n..].as_ptr(),
            &ni,
            &0.0,
            out.as_mut_ptr(),
            &ni,
        );
    }
    // dsyrk fills the column-major lower triangle, i.e. index col*n + row for
    // row >= col; mirror it into the untouched half.
    for col in 0..n {
        for row in col + 1..n {
            out[row * n + col] = out[col * n + row];
        }
    }
    Ok(())
}
