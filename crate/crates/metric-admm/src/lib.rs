//! First-order solvers for semidefinite programs and convexified QCQPs built
//! on a metric-equipped ADMM.
//!
//! The crate provides:
//!
//! * [`symmat`] — a dense symmetric-matrix kernel with the eigenvalue-clamp
//!   projection onto the positive semidefinite cone;
//! * [`metric`] — a block-structured, definiteness-invariant metric family
//!   `(k, γ1, γ2)` whose cone projection stays closed-form inside the metric
//!   space;
//! * [`quartic`] — closed-form roots of the degree-4 polynomial that yields
//!   the optimal metric parameters, plus an independent bisection oracle;
//! * [`tuner`] — optimal parameter selection from a reference solution pair,
//!   with a finite search over the block splits;
//! * [`sdp`] and [`qcqp`] — scalar- and metric-mode ADMM solvers for
//!   standard-form SDPs and lifted convexified QCQPs (with a Boolean
//!   quadratic programming fast path);
//! * [`harness`] — seeded experiment generators, oracle reference runs, the
//!   exhaustive scalar-limit search and dimension sweeps.
//!
//! The `madmm` binary exposes the harness as a CLI. See the `book/`
//! directory for a guided tour; its code snippets compile and run as part of
//! `cargo test --doc`.

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod eig;
pub mod symmat;
pub mod metric;
pub mod quartic;
pub mod tuner;
mod linalg;
pub mod sdp;
pub mod qcqp;
pub mod harness;

mod guide;

pub use error::{Error, Result};
pub use metric::Metric;
pub use qcqp::QcqpProblem;
pub use sdp::{SdpProblem, SolveReport, SolverConfig};
pub use symmat::{BlockNorms, BlockPartition, SymMat};
pub use tuner::{ReferencePair, TuneResult};
